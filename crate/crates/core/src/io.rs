//! JSON file formats.
//!
//! A subspace is written as its canonical F_p-echelon rows, each row one
//! element integer (base-p digits). `q` names the base field F_q; the ambient
//! field is given by its spec string.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::CyclicCode;
use crate::field::{Elem, Extension, FieldError, FieldSpec};
use crate::sidon::{SidonError, SubspaceFamily};
use crate::subspace::{Subspace, SubspaceError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("subspaces of one file must share the field")]
    MixedFields,
    #[error("file lists no subspaces")]
    Empty,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Sidon(#[from] SidonError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub field: String,
    pub q: u32,
    pub basis: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub field: String,
    pub q: u32,
    pub subspaces: Vec<SubspaceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeManifest {
    pub field: String,
    pub q: u32,
    pub t: usize,
    pub generators: Vec<SubspaceJson>,
    pub size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<usize>,
}

/// Rebuilds F_{q^n} over F_q from a spec string.
pub fn extension_from_spec(field: &str, q: u32) -> Result<Arc<Extension>, IoError> {
    let spec: FieldSpec = field.parse()?;
    let gf = spec.build()?;
    Ok(Arc::new(Extension::new(Arc::new(gf), q)?))
}

pub fn subspace_to_json(u: &Subspace) -> SubspaceJson {
    SubspaceJson {
        field: u.ext().gf().spec(),
        q: u.ext().q(),
        basis: u.fp_basis().rows().iter().map(|e| e.0).collect(),
    }
}

impl SubspaceJson {
    /// The spanned subspace in the given field.
    pub fn to_subspace(&self, ext: &Arc<Extension>) -> Result<Subspace, IoError> {
        let v: Vec<Elem> = self.basis.iter().map(|&x| Elem(x)).collect();
        Ok(Subspace::span(ext, &v)?)
    }

    pub fn load(&self) -> Result<Subspace, IoError> {
        self.to_subspace(&extension_from_spec(&self.field, self.q)?)
    }

    /// Whether the rows are already the canonical echelon rows.
    pub fn is_canonical(&self) -> Result<bool, IoError> {
        Ok(subspace_to_json(&self.load()?).basis == self.basis)
    }
}

pub fn family_to_json(f: &SubspaceFamily) -> FamilyJson {
    FamilyJson {
        field: f.ext().gf().spec(),
        q: f.ext().q(),
        subspaces: f.members().iter().map(subspace_to_json).collect(),
    }
}

fn load_members(field: &str, q: u32, list: &[SubspaceJson]) -> Result<(Arc<Extension>, Vec<Subspace>), IoError> {
    let ext = extension_from_spec(field, q)?;
    let mut out = Vec::with_capacity(list.len());
    for s in list {
        if s.q != q || extension_from_spec(&s.field, s.q)? != ext {
            return Err(IoError::MixedFields);
        }
        out.push(s.to_subspace(&ext)?);
    }
    Ok((ext, out))
}

impl FamilyJson {
    pub fn load(&self) -> Result<SubspaceFamily, IoError> {
        let (_, members) = load_members(&self.field, self.q, &self.subspaces)?;
        if members.is_empty() {
            return Err(IoError::Empty);
        }
        Ok(SubspaceFamily::new(members)?)
    }
}

pub fn code_manifest(code: &CyclicCode, with_distance: bool) -> CodeManifest {
    CodeManifest {
        field: code.ext().gf().spec(),
        q: code.ext().q(),
        t: code.t(),
        generators: code.generators().iter().map(subspace_to_json).collect(),
        size: code.size(),
        min_distance: if with_distance {
            code.min_distance().map(|d| d.distance)
        } else {
            None
        },
    }
}

impl CodeManifest {
    /// The generator family; `size` and `min_distance` are not trusted.
    pub fn generator_family(&self) -> Result<SubspaceFamily, IoError> {
        FamilyJson {
            field: self.field.clone(),
            q: self.q,
            subspaces: self.generators.clone(),
        }
        .load()
    }
}
