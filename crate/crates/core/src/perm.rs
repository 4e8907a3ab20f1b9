//! Permutations of {0,1,2,3}, the vertex relabelings used by face gluings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::triangulation::StructuralError;

/// A permutation of {0,1,2,3}. `image[k]` is where vertex `k` goes.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Perm4 {
    image: [u8; 4],
}

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4 { image: [0, 1, 2, 3] };

    pub fn new(image: [u8; 4]) -> Result<Self, StructuralError> {
        let mut seen = [false; 4];
        for &v in &image {
            if v > 3 || seen[v as usize] {
                return Err(StructuralError::BadPermutation {
                    digits: format!("{}{}{}{}", image[0], image[1], image[2], image[3]),
                });
            }
            seen[v as usize] = true;
        }
        Ok(Perm4 { image })
    }

    /// Parses the 4-digit form used by the file format, e.g. "0132".
    pub fn from_digits(s: &str) -> Result<Self, StructuralError> {
        let bad = || StructuralError::BadPermutation { digits: s.to_string() };
        let bytes = s.as_bytes();
        if bytes.len() != 4 {
            return Err(bad());
        }
        let mut image = [0u8; 4];
        for (k, &b) in bytes.iter().enumerate() {
            if !(b'0'..=b'3').contains(&b) {
                return Err(bad());
            }
            image[k] = b - b'0';
        }
        Perm4::new(image)
    }

    pub fn digits(&self) -> String {
        self.image.iter().map(|d| (b'0' + d) as char).collect()
    }

    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.image[k] as usize
    }

    pub fn inverse(&self) -> Perm4 {
        let mut image = [0u8; 4];
        for k in 0..4 {
            image[self.image[k] as usize] = k as u8;
        }
        Perm4 { image }
    }

    /// `self.compose(other)` applies `other` first, then `self`.
    pub fn compose(&self, other: &Perm4) -> Perm4 {
        let mut image = [0u8; 4];
        for k in 0..4 {
            image[k] = self.image[other.image[k] as usize];
        }
        Perm4 { image }
    }

    /// +1 for even permutations, -1 for odd.
    pub fn sign(&self) -> i8 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.image[i] > self.image[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image == [0, 1, 2, 3]
    }

    /// All 24 permutations, in lexicographic order of their digit strings.
    pub fn all() -> impl Iterator<Item = Perm4> {
        let mut perms = Vec::with_capacity(24);
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        if let Ok(p) = Perm4::new([a, b, c, d]) {
                            perms.push(p);
                        }
                    }
                }
            }
        }
        perms.into_iter()
    }

    pub fn transposition(a: usize, b: usize) -> Perm4 {
        let mut image = [0u8, 1, 2, 3];
        image.swap(a, b);
        Perm4 { image }
    }

    /// Parity of the restriction to three elements, comparing two ordered triples.
    /// Used when transporting oriented faces. Both slices must contain the same set.
    pub fn triple_parity(from: [usize; 3], to: [usize; 3]) -> i8 {
        // position of each `from` element inside `to`
        let mut pos = [0usize; 3];
        for (i, f) in from.iter().enumerate() {
            pos[i] = to.iter().position(|t| t == f).expect("triples must match");
        }
        let mut inv = 0;
        for i in 0..3 {
            for j in i + 1..3 {
                if pos[i] > pos[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({})", self.digits())
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits())
    }
}

impl TryFrom<String> for Perm4 {
    type Error = StructuralError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        Perm4::from_digits(&s)
    }
}

impl From<Perm4> for String {
    fn from(p: Perm4) -> String {
        p.digits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_print() {
        let p = Perm4::from_digits("2103").unwrap();
        assert_eq!(p.digits(), "2103");
        assert_eq!(p.apply(0), 2);
        assert_eq!(p.apply(3), 3);
        assert!(Perm4::from_digits("2104").is_err());
        assert!(Perm4::from_digits("2100").is_err());
        assert!(Perm4::from_digits("210").is_err());
    }

    #[test]
    fn all_has_24() {
        let all: Vec<_> = Perm4::all().collect();
        assert_eq!(all.len(), 24);
        assert_eq!(all.iter().filter(|p| p.sign() == 1).count(), 12);
    }

    #[test]
    fn signs() {
        assert_eq!(Perm4::IDENTITY.sign(), 1);
        assert_eq!(Perm4::from_digits("0132").unwrap().sign(), -1);
        assert_eq!(Perm4::from_digits("1230").unwrap().sign(), -1);
        assert_eq!(Perm4::from_digits("1032").unwrap().sign(), 1);
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(k in 0usize..24) {
            let p = Perm4::all().nth(k).unwrap();
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }

        #[test]
        fn sign_is_multiplicative(a in 0usize..24, b in 0usize..24) {
            let p = Perm4::all().nth(a).unwrap();
            let q = Perm4::all().nth(b).unwrap();
            prop_assert_eq!(p.compose(&q).sign(), p.sign() * q.sign());
        }
    }
}
