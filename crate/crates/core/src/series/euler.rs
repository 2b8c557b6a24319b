use num_traits::One;

use super::{TruncatedSeries, Truncation};
use crate::complex::{build_generators, ComplexSpec};
use crate::Q;

/// Σ_{n⃗} χ(Z_{n⃗}) s^{n⃗}, read off the Koszul complex ignoring the
/// differential: each odd generator contributes (1 − s^w), each even one
/// (1 − s^w)^{−1}.
pub fn euler_series_lhs(spec: &ComplexSpec, max_s: u32) -> TruncatedSeries {
    let space = build_generators(spec).koszul_space();
    let trunc = Truncation::new(max_s, 0);
    let m = space.rank();
    let mut acc = TruncatedSeries::one(m, trunc);
    for g in space.generators() {
        let e = if g.is_odd() { 1 } else { -1 };
        acc = acc.mul(&TruncatedSeries::binomial_power(
            m,
            trunc,
            &g.degree.weight,
            0,
            &-Q::one(),
            e,
        ));
    }
    acc
}

/// (Π_i (1 − s_i))^{−χ(M)} · (1 − (s_1⋯s_m)^k)^{χ(M; twist^{mk−1})}.
pub fn euler_series_rhs(spec: &ComplexSpec, max_s: u32) -> TruncatedSeries {
    let man = spec.manifold();
    let m = spec.m() as usize;
    let trunc = Truncation::new(max_s, 0);
    let chi = man.euler_char(0);
    let chi_tw = man.euler_char(((spec.mk() - 1) % 2) as u8);
    let mut acc = TruncatedSeries::one(m, trunc);
    for i in 0..m {
        let mut w = vec![0; m];
        w[i] = 1;
        acc = acc.mul(&TruncatedSeries::binomial_power(m, trunc, &w, 0, &-Q::one(), -chi));
    }
    let diag = vec![spec.k(); m];
    acc.mul(&TruncatedSeries::binomial_power(m, trunc, &diag, 0, &-Q::one(), chi_tw))
}
