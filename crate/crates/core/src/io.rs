//! The triangulation file format: a single JSON object with `name`,
//! `tetrahedra` and a `gluings` array of t rows of 4 entries, each entry
//! `null` or `[j, "p0p1p2p3"]`. Serialization is canonical: parsing a file
//! produced by [`serialize`] and serializing again is the identity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm4;
use crate::triangulation::{Gluing, StructuralError, Triangulation};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed triangulation file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("tetrahedra field is {declared} but gluings has {actual} rows")]
    RowCountMismatch { declared: usize, actual: usize },
    #[error(transparent)]
    Structural(#[from] StructuralError),
}

#[derive(Serialize, Deserialize)]
struct FileForm {
    name: String,
    tetrahedra: usize,
    gluings: Vec<[Option<(usize, String)>; 4]>,
}

pub fn parse(text: &str) -> Result<Triangulation, FormatError> {
    let form: FileForm = serde_json::from_str(text)?;
    if form.tetrahedra != form.gluings.len() {
        return Err(FormatError::RowCountMismatch {
            declared: form.tetrahedra,
            actual: form.gluings.len(),
        });
    }
    let mut gluings = Vec::with_capacity(form.gluings.len());
    for row in &form.gluings {
        let mut out = [None; 4];
        for (f, entry) in row.iter().enumerate() {
            if let Some((tet, digits)) = entry {
                out[f] = Some(Gluing { tet: *tet, perm: Perm4::from_digits(digits)? });
            }
        }
        gluings.push(out);
    }
    Ok(Triangulation::new(form.name, gluings)?)
}

pub fn serialize(tri: &Triangulation) -> String {
    let form = FileForm {
        name: tri.name().to_string(),
        tetrahedra: tri.tetra_count(),
        gluings: tri
            .rows()
            .iter()
            .map(|row| {
                let mut out: [Option<(usize, String)>; 4] = [None, None, None, None];
                for (f, entry) in row.iter().enumerate() {
                    out[f] = entry.map(|g| (g.tet, g.perm.digits()));
                }
                out
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&form).expect("serializable");
    text.push('\n');
    text
}

pub fn read_file(path: &std::path::Path) -> Result<Triangulation, std::io::Error> {
    let text = std::fs::read_to_string(path)?;
    parse(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}
