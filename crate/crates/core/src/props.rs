//! Randomized property suites: PVA axioms of a base bracket on random
//! triples, and the algebraic laws of the differential polynomial normal form.

use std::sync::Arc;

use rand::Rng;

use crate::diffpoly::{DiffPoly, GeneratorSpace, Parity};
use crate::lambda::LambdaBracket;
use crate::report::CheckReport;
use crate::sample::{SampleShape, Sampler};
use crate::scalar::Scalar;
use crate::text;

/// Degree at most 3, derivative order at most 2, up to 3 terms.
pub fn default_shape() -> SampleShape {
    SampleShape {
        max_degree: 3,
        max_order: 2,
        max_terms: 3,
    }
}

/// Skewsymmetry on `n` random pairs and Jacobi on `n` random triples.
pub fn check_bracket_axioms(br: &LambdaBracket, n: usize, seed: u64) -> CheckReport {
    let space = br.space().clone();
    let mut s = Sampler::new(seed, default_shape());
    let mut rep = CheckReport::new(format!("PVA axioms on {}", space.label()));
    rep.extend(br.check_skewsymmetry(&s.pairs(&space, n)));
    rep.extend(br.check_jacobi(&s.triples(&space, n)));
    rep
}

fn koszul(a: &DiffPoly, b: &DiffPoly) -> Scalar {
    let pa = a.parity().unwrap_or(Parity::Even);
    let pb = b.parity().unwrap_or(Parity::Even);
    Scalar::from_int(pa.koszul(pb))
}

/// `n` cases of: associativity, supercommutativity `ab = (-1)^{p(a)p(b)} ba`,
/// distributivity, Leibniz for `∂`, odd squares vanishing and the
/// render/parse round trip of the canonical form.
pub fn check_diffpoly_laws(space: &Arc<GeneratorSpace>, n: usize, seed: u64) -> CheckReport {
    let mut s = Sampler::new(seed, default_shape());
    let mut rep = CheckReport::new(format!("normal form laws on {}", space.label()));
    for i in 0..n {
        let (a, b, c) = (s.any(space), s.any(space), s.any(space));
        let loc = format!("case {}", i);
        let res = |ok: bool, what: &str| (!ok).then(|| what.to_string());
        match i % 6 {
            0 => {
                let l = &(&a * &b) * &c;
                let r = &a * &(&b * &c);
                rep.record("associativity", loc, res(l == r, "(ab)c != a(bc)"));
            }
            1 => {
                let ab = &a * &b;
                let ba = (&b * &a).scale(&koszul(&a, &b));
                rep.record("supercommutativity", loc, res(ab == ba, "ab != ±ba"));
            }
            2 => {
                let l = &a * &(&b + &c);
                let r = &(&a * &b) + &(&a * &c);
                rep.record("distributivity", loc, res(l == r, "a(b+c) != ab+ac"));
            }
            3 => {
                let l = (&a * &b).partial();
                let r = &(&a.partial() * &b) + &(&a * &b.partial());
                rep.record("leibniz", loc, res(l == r, "∂(ab) != ∂a b + a ∂b"));
            }
            4 => {
                let odd: Vec<usize> = (0..space.len()).filter(|&g| space.parity(g).is_odd()).collect();
                if odd.is_empty() {
                    let l = &a - &a;
                    rep.record("cancellation", loc, res(l.is_zero(), "a - a != 0"));
                } else {
                    let g = odd[s.rng().gen_range(0..odd.len())];
                    let o = s.rng().gen_range(0..3);
                    let x = DiffPoly::symbol(space, g, o);
                    let sq = &(&x * &a) * &x;
                    rep.record("odd square", loc, res(sq.is_zero(), "x a x != 0 for odd x"));
                }
            }
            _ => {
                let back = text::parse_diffpoly(space, &text::render_diffpoly(&a));
                rep.record(
                    "round trip",
                    loc,
                    match back {
                        Ok(p) if p == a => None,
                        Ok(p) => Some(format!("{} reparsed as {}", a, p)),
                        Err(e) => Some(e.to_string()),
                    },
                );
            }
        }
    }
    rep
}
