#![allow(dead_code)]

use moutard_core::exactpoly::{GaussianRational, TriPoly};
use moutard_core::heat::{HeatCombination, HeatSign};
use proptest::prelude::*;

pub fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
        .prop_map(|(a, b, c, d)| GaussianRational::from_ratios(a, b, c, d))
}

pub fn nonzero_gaussian() -> impl Strategy<Value = GaussianRational> {
    gaussian().prop_filter("nonzero", |g| !num_traits::Zero::is_zero(g))
}

/// Sparse polynomial in z, w, t with up to six terms of degree ≤ 3 per variable.
pub fn tripoly() -> impl Strategy<Value = TriPoly> {
    prop::collection::vec((0u32..=3, 0u32..=3, 0u32..=3, gaussian()), 0..6).prop_map(|terms| {
        terms
            .into_iter()
            .fold(TriPoly::zero(), |acc, (a, b, c, g)| &acc + &TriPoly::monomial(g, a, b, c))
    })
}

pub fn heat_combination(sign: HeatSign) -> impl Strategy<Value = HeatCombination> {
    prop::collection::vec((1u32..=8, nonzero_gaussian()), 1..4)
        .prop_map(move |terms| HeatCombination::new(sign, terms))
}
