//! A lambda-bracket expander written from scratch: it splits the left
//! argument with the right Leibniz rule and the right argument with the left
//! Leibniz rule, the opposite of the library's recursion.

use std::sync::Arc;

use walg::diffpoly::{DiffPoly, DiffSymbol, GeneratorSpace};
use walg::scalar::{q, Scalar};
use walg::{LambdaBracket, LambdaPoly, Q};

/// Coefficients of `λ^0, λ^1, ...`.
type Naive = Vec<DiffPoly>;

fn binom(n: u32, i: u32) -> Q {
    let mut r = q(1, 1);
    for j in 0..i {
        r = r * q((n - j) as i64, (j + 1) as i64);
    }
    r
}

fn add_at(v: &mut Naive, sp: &Arc<GeneratorSpace>, n: usize, p: &DiffPoly) {
    while v.len() <= n {
        v.push(DiffPoly::zero(sp));
    }
    v[n] += p;
}

fn sign(neg: bool) -> Scalar {
    Scalar::from_int(if neg { -1 } else { 1 })
}

/// `{∂^m a λ ∂^n b} = (-λ)^m (λ+∂)^n {a λ b}`
fn symbols(br: &LambdaBracket, s: DiffSymbol, t: DiffSymbol) -> Naive {
    let sp = br.space();
    let mut out = Vec::new();
    for (j, c) in br.entry(s.gen(), t.gen()).coeffs() {
        let mut d = c.clone();
        for i in 0..=t.order {
            let term = d.scale_q(&(binom(t.order, i) * if s.order % 2 == 1 { q(-1, 1) } else { q(1, 1) }));
            add_at(&mut out, sp, (j + t.order - i + s.order) as usize, &term);
            d = d.partial();
        }
    }
    out
}

/// `Σ_j c_j (λ+∂)^j y`
fn arrow(sp: &Arc<GeneratorSpace>, x: &Naive, y: &DiffPoly) -> Naive {
    let mut out = Vec::new();
    for (j, c) in x.iter().enumerate() {
        let mut d = y.clone();
        for i in 0..=j as u32 {
            add_at(&mut out, sp, j - i as usize, &(c * &d).scale_q(&binom(j as u32, i)));
            d = d.partial();
        }
    }
    out
}

fn mono(sp: &Arc<GeneratorSpace>, syms: &[DiffSymbol]) -> DiffPoly {
    DiffPoly::product_of(sp, syms.to_vec(), Scalar::one())
}

fn odd_count(syms: &[DiffSymbol]) -> bool {
    syms.iter().filter(|s| s.odd).count() % 2 == 1
}

/// `{s R λ t} = (-1)^{p(R)p(t)} {s_{λ+∂} t}_→ R + (-1)^{p(s)(p(R)+p(t))} {R_{λ+∂} t}_→ s`
fn left_product(br: &LambdaBracket, a: &[DiffSymbol], t: DiffSymbol) -> Naive {
    let sp = br.space();
    if a.len() == 1 {
        return symbols(br, a[0], t);
    }
    let (s, rest) = (a[0], &a[1..]);
    let pr = odd_count(rest);
    let mut out = Vec::new();
    let first = arrow(sp, &symbols(br, s, t), &mono(sp, rest));
    for (n, c) in first.iter().enumerate() {
        add_at(&mut out, sp, n, &c.scale(&sign(pr && t.odd)));
    }
    let second = arrow(sp, &left_product(br, rest, t), &mono(sp, &[s]));
    for (n, c) in second.iter().enumerate() {
        add_at(&mut out, sp, n, &c.scale(&sign(s.odd && (pr ^ t.odd))));
    }
    out
}

/// `{A λ t R} = {A λ t} R + (-1)^{p(A)p(t)} t {A λ R}`
fn right_product(br: &LambdaBracket, a: &[DiffSymbol], b: &[DiffSymbol]) -> Naive {
    let sp = br.space();
    let (t, rest) = (b[0], &b[1..]);
    let mut out = Vec::new();
    for (n, c) in left_product(br, a, t).iter().enumerate() {
        add_at(&mut out, sp, n, &(c * &mono(sp, rest)));
    }
    if !rest.is_empty() {
        let s = sign(odd_count(a) && t.odd);
        for (n, c) in right_product(br, a, rest).iter().enumerate() {
            add_at(&mut out, sp, n, &(&mono(sp, &[t]) * c).scale(&s));
        }
    }
    out
}

pub fn naive(br: &LambdaBracket, a: &DiffPoly, b: &DiffPoly) -> LambdaPoly {
    let sp = br.space();
    let mut out = LambdaPoly::zero(sp);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if ma.is_one() || mb.is_one() {
                continue;
            }
            for (n, c) in right_product(br, ma.symbols(), mb.symbols()).into_iter().enumerate() {
                out.add_coeff(n as u32, &c.scale(&(ca * cb)));
            }
        }
    }
    out
}
