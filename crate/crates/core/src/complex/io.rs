use serde::{Deserialize, Serialize};

use super::{Complex, Simplex};
use crate::error::{Error, Result};

/// On-disk description of a complex.
///
/// `simplices` lists generating simplices whose faces are added automatically.
/// When `faces` is present the document is explicit: the union of both lists
/// must already be face-closed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub name: String,
    pub dimension: usize,
    pub simplices: Vec<Simplex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Simplex>>,
}

pub fn load_complex(document: &str) -> Result<Complex> {
    let doc: ComplexDocument = serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_complex()
}

impl ComplexDocument {
    pub fn into_complex(self) -> Result<Complex> {
        let top = self.simplices.iter().map(|s| s.len().saturating_sub(1)).max();
        if top != Some(self.dimension) {
            return Err(Error::Parse(format!(
                "declared dimension {} but simplices have maximal dimension {:?}",
                self.dimension, top
            )));
        }
        match self.faces {
            Some(faces) => Complex::from_explicit(self.name, self.simplices.into_iter().chain(faces)),
            None => {
                let mut seen = std::collections::HashSet::new();
                for s in &self.simplices {
                    let mut sorted = s.clone();
                    sorted.sort_unstable();
                    if !seen.insert(sorted.clone()) {
                        return Err(Error::Duplicate(sorted));
                    }
                }
                Complex::from_simplices(self.name, self.simplices)
            }
        }
    }

    pub fn from_complex(x: &Complex) -> Self {
        let dim = x.dim();
        Self { name: x.name().to_string(), dimension: dim, simplices: x.simplices(dim).to_vec(), faces: None }
    }
}

/// On-disk integer chain: `{"degree": j, "chain": {"v0,v1,...": n}}`. Keys
/// list the vertices of a `j`-simplex in any order; an odd permutation of
/// the sorted order flips the sign of the coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    pub degree: usize,
    pub chain: std::collections::BTreeMap<String, i64>,
}

/// Parse a chain document against `x`, as a coefficient vector indexed like
/// the `j`-simplices of `x`.
pub fn load_chain(x: &Complex, document: &str) -> Result<(usize, Vec<crate::Integer>)> {
    let doc: ChainDocument = serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let j = doc.degree;
    if j > x.dim() {
        return Err(Error::Parse(format!("degree {j} exceeds the dimension {}", x.dim())));
    }
    let mut out = vec![crate::Integer::from(0); x.count(j)];
    for (key, n) in &doc.chain {
        let verts = key
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex {t:?} in {key:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if verts.len() != j + 1 {
            return Err(Error::Parse(format!("{key:?} is not a {j}-simplex")));
        }
        let (sorted, sign) = super::orient(&verts).ok_or_else(|| Error::Parse(format!("repeated vertex in {key:?}")))?;
        let i = x.index_of(&sorted).ok_or_else(|| Error::Parse(format!("{key:?} is not a simplex of {}", x.name())))?;
        out[i] += n * sign;
    }
    Ok((j, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_documents() {
        let x = load_complex(r#"{"name":"s1","dimension":1,"simplices":[[0,1],[1,2],[0,2]]}"#).unwrap();
        let (j, z) = load_chain(&x, r#"{"degree":1,"chain":{"0,1":1,"1,2":1,"2,0":1}}"#).unwrap();
        assert_eq!(j, 1);
        assert!(x.is_cycle(1, &z));
        assert!(load_chain(&x, r#"{"degree":1,"chain":{"0,3":1}}"#).is_err());
        assert!(load_chain(&x, r#"{"degree":1,"chain":{"0":1}}"#).is_err());
    }

    #[test]
    fn triangle_circle() {
        let x = load_complex(
            r#"{"name":"s1","dimension":1,"simplices":[[0,1],[1,2],[0,2]],"faces":[[0],[1],[2]]}"#,
        )
        .unwrap();
        assert_eq!(x.counts(), vec![3, 3]);
    }

    #[test]
    fn missing_edge() {
        let err = load_complex(
            r#"{"name":"t","dimension":2,"simplices":[[0,1,2]],"faces":[[0],[1],[2],[0,1],[1,2]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::FaceClosure { .. }));
    }

    #[test]
    fn duplicate_and_malformed() {
        let err = load_complex(r#"{"name":"d","dimension":1,"simplices":[[0,1],[1,0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Duplicate(_)));
        assert!(matches!(load_complex("{not json"), Err(Error::Parse(_))));
        assert!(matches!(
            load_complex(r#"{"name":"d","dimension":2,"simplices":[[0,1]]}"#),
            Err(Error::Parse(_))
        ));
    }
}
