//! The fixed cone corpus used by reports and tests.

use crate::cone::{make_cone, Cone, IntVector};

fn cone(gens: &[[i64; 3]]) -> Cone {
    make_cone(gens.iter().map(|g| IntVector(g.to_vec())).collect()).expect("corpus cone is valid")
}

/// `R^r_{>=0}`.
pub fn standard(r: usize) -> Cone {
    Cone::standard(r)
}

/// The cone over the unit square, with four facets meeting at the apex.
pub fn conifold() -> Cone {
    cone(&[[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]])
}

/// A good 3d cone over a pentagon.
pub fn pentagon() -> Cone {
    cone(&[[0, 1, 1], [1, 0, 1], [2, 0, 1], [2, 2, 1], [0, 2, 1]])
}

/// `(name, cone)` pairs: standard cones for `r = 2..=4`, the conifold and the pentagon cone.
pub fn default_corpus() -> Vec<(&'static str, Cone)> {
    vec![
        ("standard2", standard(2)),
        ("standard3", standard(3)),
        ("standard4", standard(4)),
        ("conifold", conifold()),
        ("pentagon", pentagon()),
    ]
}

/// Looks a corpus cone up by name.
pub fn by_name(name: &str) -> Option<Cone> {
    default_corpus()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::is_good;
    use crate::subdivision::{
        check_signed_counts, inclusion_exclusion_complex, unimodular_subdivide,
    };

    #[test]
    fn corpus_cones_are_good() {
        for (name, c) in default_corpus() {
            assert!(is_good(&c).unwrap().is_good(), "{name}");
        }
        assert_eq!(pentagon().generators().len(), 5);
        assert_eq!(pentagon().normals().len(), 5);
    }

    #[test]
    fn pentagon_subdivision_counts() {
        let c = pentagon();
        let pieces = unimodular_subdivide(&c).unwrap();
        let sc = inclusion_exclusion_complex(&c, &pieces).unwrap();
        assert_eq!(check_signed_counts(&sc, 0, 8), None);
    }
}
