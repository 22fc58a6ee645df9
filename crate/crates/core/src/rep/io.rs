//! JSON document format for objects: family spec, dimensions by class label,
//! transition matrices by morphism label, entries as `p/q` strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Rep;
use crate::error::{Error, Result};
use crate::exactla::{format_q, parse_q, RationalMatrix};
use crate::family::{FamilySpec, GroupFamily};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepFile {
    pub family: FamilySpec,
    pub dims: BTreeMap<String, usize>,
    /// Row-major matrices; missing entries are allowed only for empty matrices.
    pub transitions: BTreeMap<String, Vec<Vec<String>>>,
}

impl RepFile {
    pub fn from_rep(x: &Rep) -> RepFile {
        let f = x.family();
        let dims = (0..f.num_classes())
            .map(|c| (f.label(c).to_string(), x.dim(c)))
            .collect();
        let transitions = f
            .homs_iter()
            .map(|(h, hom)| {
                let m = x.transition(h);
                let rows = (0..m.rows())
                    .map(|r| m.row(r).iter().map(format_q).collect())
                    .collect();
                (hom.label.clone(), rows)
            })
            .collect();
        RepFile {
            family: f.spec().clone(),
            dims,
            transitions,
        }
    }

    pub fn to_rep(&self) -> Result<Rep> {
        let family = GroupFamily::from_spec(&self.family)?;
        self.to_rep_over(&family)
    }

    /// Shapes are checked; functor laws are left to [`Rep::validate`].
    pub fn to_rep_over(&self, family: &Arc<GroupFamily>) -> Result<Rep> {
        if *family.spec() != self.family {
            return Err(Error::FamilyMismatch);
        }
        let mut dims = vec![0; family.num_classes()];
        for (label, &d) in &self.dims {
            dims[family.class_index(label)?] = d;
        }
        for label in self.transitions.keys() {
            family.hom_index(label)?;
        }
        let transitions = family
            .homs_iter()
            .map(|(_, hom)| {
                let (r, c) = (dims[hom.source], dims[hom.target]);
                match self.transitions.get(&hom.label) {
                    Some(rows) => {
                        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                            return Err(Error::ShapeMismatch(format!(
                                "transition `{}` should be {r}x{c}",
                                hom.label
                            )));
                        }
                        let data = rows
                            .iter()
                            .flatten()
                            .map(|s| parse_q(s))
                            .collect::<Result<Vec<_>>>()?;
                        RationalMatrix::from_vec(r, c, data)
                    }
                    None if r == 0 || c == 0 => Ok(RationalMatrix::zeros(r, c)),
                    None => Err(Error::Parse(format!("missing transition `{}`", hom.label))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Rep::from_parts(family.clone(), dims, transitions)
    }
}

pub fn write_rep(x: &Rep) -> String {
    serde_json::to_string_pretty(&RepFile::from_rep(x)).expect("serializable")
}

pub fn read_rep(text: &str) -> Result<Rep> {
    let file: RepFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_rep()
}
