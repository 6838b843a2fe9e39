//! The shipped corpus of complexes (`corpus/*.json` at the repository root).

use std::sync::Arc;

use crate::complex::{load_complex, Complex};

pub const NAMES: [&str; 8] = ["point", "interval", "s1", "s2", "t2", "rp2", "klein", "moore3"];

pub fn document(name: &str) -> Option<&'static str> {
    Some(match name {
        "point" => include_str!("../../../corpus/point.json"),
        "interval" => include_str!("../../../corpus/interval.json"),
        "s1" => include_str!("../../../corpus/s1.json"),
        "s2" => include_str!("../../../corpus/s2.json"),
        "t2" => include_str!("../../../corpus/t2.json"),
        "rp2" => include_str!("../../../corpus/rp2.json"),
        "klein" => include_str!("../../../corpus/klein.json"),
        "moore3" => include_str!("../../../corpus/moore3.json"),
        _ => return None,
    })
}

/// A corpus complex by name. Panics on unknown names.
pub fn get(name: &str) -> Arc<Complex> {
    let doc = document(name).unwrap_or_else(|| panic!("no corpus complex named {name}"));
    Arc::new(load_complex(doc).expect("corpus files are valid"))
}

pub fn all() -> Vec<Arc<Complex>> {
    NAMES.iter().map(|n| get(n)).collect()
}
