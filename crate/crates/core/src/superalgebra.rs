//! Finite-dimensional Lie superalgebras given by exact structure constants.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffpoly::{DiffPoly, GeneratorSpace, Parity};
use crate::lambda::{LambdaBracket, LambdaPoly};
use crate::linalg::{self, Matrix};
use crate::report::CheckReport;
use crate::scalar::{q, qi, Scalar, Q};
use crate::text;
use crate::weight::HalfInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("axiom violated: {axiom} at {location}")]
    AxiomViolation { axiom: String, location: String },
    #[error("grading error: {0}")]
    Grading(String),
    #[error("the invariant form is degenerate")]
    DegenerateForm,
    #[error("unknown built-in algebra {0:?}")]
    UnknownBuiltin(String),
}

fn violation(axiom: &str, location: impl Into<String>) -> AlgebraError {
    AlgebraError::AxiomViolation {
        axiom: axiom.to_string(),
        location: location.into(),
    }
}

/// An element of the algebra in coordinates of the declared basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(Vec<Q>);

impl Elem {
    pub fn zero(dim: usize) -> Self {
        Elem(vec![Q::zero(); dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Elem::zero(dim);
        v.0[i] = Q::one();
        v
    }

    pub fn from_coords(c: Vec<Q>) -> Self {
        Elem(c)
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> &Q {
        &self.0[i]
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Indices with nonzero coordinate.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }

    pub fn scale(&self, c: &Q) -> Elem {
        Elem(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add_scaled(&mut self, other: &Elem, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b * c;
        }
    }
}

impl Add<&Elem> for &Elem {
    type Output = Elem;
    fn add(self, o: &Elem) -> Elem {
        Elem(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Elem> for &Elem {
    type Output = Elem;
    fn sub(self, o: &Elem) -> Elem {
        Elem(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(text::render_q).collect();
        write!(f, "Elem[{}]", parts.join(", "))
    }
}

/// The even sl₂-triple `(e, 2x, f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    pub e: Elem,
    pub x: Elem,
    pub f: Elem,
}

/// Bases `{u_α}` and `{u^α}` with `(u_α | u^β) = δ_{αβ}`.
#[derive(Clone, Debug)]
pub struct DualBases {
    pub upper: Vec<Elem>,
}

impl DualBases {
    /// Recomputes the pairing matrix and checks it is the identity.
    pub fn pairing_is_identity(&self, alg: &LieSuperalgebra) -> bool {
        (0..alg.dim()).all(|a| {
            (0..alg.dim()).all(|b| {
                let v = alg.form(&alg.basis(a), &self.upper[b]);
                if a == b {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }
}

/// Bases `{z_α}`, `{z*_α}` of `g(1/2)` with `[z_α, z*_β] = -δ_{αβ} e`.
#[derive(Clone, Debug)]
pub struct MinimalData {
    pub z: Vec<Elem>,
    pub z_star: Vec<Elem>,
}

#[derive(Clone)]
pub struct LieSuperalgebra {
    name: String,
    space: Arc<GeneratorSpace>,
    brackets: Vec<Vec<Elem>>,
    form: Matrix,
    sl2: Sl2Triple,
    grading: Vec<HalfInt>,
    labels: BTreeMap<String, String>,
}

impl fmt::Debug for LieSuperalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieSuperalgebra({}, dim {})", self.name, self.dim())
    }
}

/// Raw description handed to [`LieSuperalgebra::new`].
pub struct AlgebraData {
    pub name: String,
    pub generators: Vec<(String, Parity)>,
    /// Partial table; missing orientations are filled by skewsymmetry.
    pub brackets: BTreeMap<(usize, usize), Vec<Q>>,
    /// Partial form; missing orientations are filled by supersymmetry.
    pub form: BTreeMap<(usize, usize), Q>,
    pub sl2: (Vec<Q>, Vec<Q>, Vec<Q>),
    pub grading: Option<Vec<Q>>,
    pub labels: BTreeMap<String, String>,
}

impl LieSuperalgebra {
    /// Validates all axioms and derives the grading.
    pub fn new(data: AlgebraData) -> Result<Self, AlgebraError> {
        let space = GeneratorSpace::new(data.name.clone(), data.generators.clone())
            .map_err(|e| AlgebraError::Parse(e.to_string()))?;
        let n = space.len();
        let name_of = |i: usize| space.name(i).to_string();

        let mut brackets = vec![vec![Elem::zero(n); n]; n];
        let mut given = vec![vec![false; n]; n];
        for (&(a, b), v) in &data.brackets {
            if a >= n || b >= n || v.len() != n {
                return Err(AlgebraError::Parse(format!("bracket entry ({}, {}) out of range", a, b)));
            }
            brackets[a][b] = Elem(v.clone());
            given[a][b] = true;
        }
        for a in 0..n {
            for b in 0..n {
                let sign = qi(-space.parity(a).koszul(space.parity(b)));
                match (given[a][b], given[b][a]) {
                    (true, true) => {
                        if brackets[a][b] != brackets[b][a].scale(&sign) {
                            return Err(violation(
                                "skewsymmetry",
                                format!("({}, {})", name_of(a), name_of(b)),
                            ));
                        }
                    }
                    (false, true) => brackets[a][b] = brackets[b][a].scale(&sign),
                    _ => {}
                }
            }
        }
        // [a, a] must vanish for even a
        for a in 0..n {
            if !space.parity(a).is_odd() && !brackets[a][a].is_zero() {
                return Err(violation("skewsymmetry", format!("({0}, {0})", name_of(a))));
            }
        }

        let mut form = linalg::zeros(n, n);
        let mut fgiven = vec![vec![false; n]; n];
        for (&(a, b), v) in &data.form {
            if a >= n || b >= n {
                return Err(AlgebraError::Parse(format!("form entry ({}, {}) out of range", a, b)));
            }
            form[a][b] = v.clone();
            fgiven[a][b] = true;
        }
        for a in 0..n {
            for b in 0..n {
                let sign = qi(space.parity(a).koszul(space.parity(b)));
                match (fgiven[a][b], fgiven[b][a]) {
                    (true, true) => {
                        if form[a][b] != &form[b][a] * &sign {
                            return Err(violation(
                                "supersymmetry of the form",
                                format!("({}, {})", name_of(a), name_of(b)),
                            ));
                        }
                    }
                    (false, true) => form[a][b] = &form[b][a] * &sign,
                    _ => {}
                }
            }
        }

        let to_elem = |v: &Vec<Q>| -> Result<Elem, AlgebraError> {
            if v.len() != n {
                return Err(AlgebraError::Parse("sl2 element has wrong dimension".into()));
            }
            Ok(Elem(v.clone()))
        };
        let sl2 = Sl2Triple {
            e: to_elem(&data.sl2.0)?,
            x: to_elem(&data.sl2.1)?,
            f: to_elem(&data.sl2.2)?,
        };

        let mut alg = LieSuperalgebra {
            name: data.name,
            space,
            brackets,
            form,
            sl2,
            grading: vec![HalfInt::ZERO; n],
            labels: data.labels,
        };
        alg.validate_structure()?;
        alg.grading = alg.derive_grading()?;
        if let Some(g) = data.grading {
            for (i, v) in g.iter().enumerate() {
                if HalfInt::from_rational(v) != Some(alg.grading[i]) {
                    return Err(AlgebraError::Grading(format!(
                        "declared weight {} of {} differs from ad x eigenvalue {}",
                        text::render_q(v),
                        alg.space.name(i),
                        alg.grading[i]
                    )));
                }
            }
        }
        Ok(alg)
    }

    fn validate_structure(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let nm = |i: usize| self.space.name(i);
        for a in 0..n {
            for b in 0..n {
                let v = &self.brackets[a][b];
                if !v.is_zero() && self.parity_of_elem(v) != Some(self.parity(a) + self.parity(b))
                {
                    return Err(violation("parity of bracket", format!("({}, {})", nm(a), nm(b))));
                }
                if self.parity(a) != self.parity(b) && !self.form[a][b].is_zero() {
                    return Err(violation("evenness of the form", format!("({}, {})", nm(a), nm(b))));
                }
            }
        }
        if let Some((a, b, c)) = self.first_jacobi_failure() {
            return Err(violation("Jacobi identity", format!("({}, {}, {})", nm(a), nm(b), nm(c))));
        }
        if let Some((a, b, c)) = self.first_invariance_failure() {
            return Err(violation("invariance of the form", format!("({}, {}, {})", nm(a), nm(b), nm(c))));
        }
        if linalg::rank(&self.form) < n {
            return Err(AlgebraError::DegenerateForm);
        }
        let Sl2Triple { e, x, f } = &self.sl2;
        for (v, nm) in [(e, "e"), (x, "x"), (f, "f")] {
            if self.parity_of_elem(v) != Some(Parity::Even) || v.is_zero() {
                return Err(violation("even sl2-triple", format!("{} is not a nonzero even element", nm)));
            }
        }
        let two_x = x.scale(&qi(2));
        if self.bracket(&two_x, e) != e.scale(&qi(2)) {
            return Err(violation("sl2 relation", "[2x, e] = 2e"));
        }
        if self.bracket(&two_x, f) != f.scale(&qi(-2)) {
            return Err(violation("sl2 relation", "[2x, f] = -2f"));
        }
        if self.bracket(e, f) != two_x {
            return Err(violation("sl2 relation", "[e, f] = 2x"));
        }
        if !self.form(e, f).is_one() {
            return Err(violation("normalization", "(e|f) = 1"));
        }
        if self.form(x, x) * qi(2) != Q::one() {
            return Err(violation("normalization", "2(x|x) = 1"));
        }
        Ok(())
    }

    /// First basis triple where `[a,[b,c]] = [[a,b],c] + (-1)^{p(a)p(b)} [b,[a,c]]` fails.
    pub fn first_jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (ea, eb, ec) = (self.basis(a), self.basis(b), self.basis(c));
                    let lhs = self.bracket(&ea, &self.bracket(&eb, &ec));
                    let mut rhs = self.bracket(&self.bracket(&ea, &eb), &ec);
                    rhs.add_scaled(
                        &self.bracket(&eb, &self.bracket(&ea, &ec)),
                        &qi(self.parity(a).koszul(self.parity(b))),
                    );
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// First basis triple where `([a,b]|c) = (a|[b,c])` fails.
    pub fn first_invariance_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let l = self.form(&self.brackets[a][b], &self.basis(c));
                    let r = self.form(&self.basis(a), &self.brackets[b][c]);
                    if l != r {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    fn derive_grading(&self) -> Result<Vec<HalfInt>, AlgebraError> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let img = self.bracket(&self.sl2.x, &self.basis(i));
            if img.support().any(|j| j != i) {
                return Err(AlgebraError::Grading(format!(
                    "ad x is not diagonal on {}",
                    self.space.name(i)
                )));
            }
            let ev = img.coord(i).clone();
            let w = HalfInt::from_rational(&ev).ok_or_else(|| {
                AlgebraError::Grading(format!(
                    "eigenvalue {} of {} is not a half-integer",
                    text::render_q(&ev),
                    self.space.name(i)
                ))
            })?;
            out.push(w);
        }
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.space.len()
    }

    /// The basis as a generator space.
    pub fn space(&self) -> &Arc<GeneratorSpace> {
        &self.space
    }

    pub fn basis_name(&self, i: usize) -> &str {
        self.space.name(i)
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.space.lookup(name)
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.space.parity(i)
    }

    pub fn basis(&self, i: usize) -> Elem {
        Elem::basis(self.dim(), i)
    }

    /// Element by basis name; panics on unknown names.
    pub fn named(&self, name: &str) -> Elem {
        self.basis(self.index(name).unwrap_or_else(|| panic!("no basis element {}", name)))
    }

    pub fn zero(&self) -> Elem {
        Elem::zero(self.dim())
    }

    /// `Some(p)` when the element is homogeneous; zero counts as even.
    pub fn parity_of_elem(&self, v: &Elem) -> Option<Parity> {
        let mut it = v.support().map(|i| self.parity(i));
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &Elem {
        &self.brackets[a][b]
    }

    pub fn bracket(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = self.zero();
        for i in a.support() {
            for j in b.support() {
                out.add_scaled(&self.brackets[i][j], &(a.coord(i) * b.coord(j)));
            }
        }
        out
    }

    pub fn form_basis(&self, a: usize, b: usize) -> &Q {
        &self.form[a][b]
    }

    pub fn form(&self, a: &Elem, b: &Elem) -> Q {
        let mut acc = Q::zero();
        for i in a.support() {
            for j in b.support() {
                acc += a.coord(i) * b.coord(j) * &self.form[i][j];
            }
        }
        acc
    }

    pub fn sl2(&self) -> &Sl2Triple {
        &self.sl2
    }

    pub fn grade(&self, i: usize) -> HalfInt {
        self.grading[i]
    }

    pub fn grading(&self) -> &[HalfInt] {
        &self.grading
    }

    /// Indices `α` with `j_α = i`.
    pub fn grading_component(&self, i: HalfInt) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.grading[a] == i).collect()
    }

    pub fn max_grade(&self) -> HalfInt {
        self.grading.iter().copied().max().unwrap_or(HalfInt::ZERO)
    }

    /// Keeps only the coordinates whose grade satisfies `keep`.
    pub fn project(&self, v: &Elem, keep: impl Fn(HalfInt) -> bool) -> Elem {
        Elem(
            v.0.iter()
                .enumerate()
                .map(|(i, c)| if keep(self.grading[i]) { c.clone() } else { Q::zero() })
                .collect(),
        )
    }

    /// Grade of a homogeneous element; `None` for zero or mixed grades.
    pub fn grade_of(&self, v: &Elem) -> Option<HalfInt> {
        let mut it = v.support().map(|i| self.grading[i]);
        let first = it.next()?;
        it.all(|g| g == first).then_some(first)
    }

    /// Solves `(u_α | u^β) = δ_{αβ}` exactly.
    pub fn dual_bases(&self) -> Result<DualBases, AlgebraError> {
        let n = self.dim();
        // column β of the inverse of the form matrix gives u^β
        let inv = linalg::inverse(&self.form).ok_or(AlgebraError::DegenerateForm)?;
        let upper: Vec<Elem> = (0..n)
            .map(|b| Elem((0..n).map(|i| inv[i][b].clone()).collect()))
            .collect();
        for (a, u) in upper.iter().enumerate() {
            if self.grade_of(u) != Some(-self.grading[a]) {
                return Err(AlgebraError::Grading(format!(
                    "dual of {} is not in g({})",
                    self.space.name(a),
                    -self.grading[a]
                )));
            }
        }
        Ok(DualBases { upper })
    }

    fn ad_matrix(&self, v: &Elem) -> Matrix {
        let n = self.dim();
        let cols: Vec<Elem> = (0..n).map(|j| self.bracket(v, &self.basis(j))).collect();
        (0..n)
            .map(|i| (0..n).map(|j| cols[j].coord(i).clone()).collect())
            .collect()
    }

    /// A basis of the centralizer `g^v = ker ad v`.
    pub fn centralizer(&self, v: &Elem) -> Vec<Elem> {
        linalg::nullspace(&self.ad_matrix(v), self.dim())
            .into_iter()
            .map(Elem)
            .collect()
    }

    /// Homogeneous basis of `g^f` adapted to the grading, each vector scaled so
    /// its first nonzero coordinate is one.
    pub fn g_f(&self) -> Vec<Elem> {
        let mut out = Vec::new();
        let mut grades: Vec<HalfInt> = self.grading.clone();
        grades.sort();
        grades.dedup();
        for g in grades {
            // kernel of ad f restricted to g(g)
            let idx = self.grading_component(g);
            let n = self.dim();
            let m: Matrix = (0..n)
                .map(|i| {
                    idx.iter()
                        .map(|&j| self.bracket(&self.sl2.f, &self.basis(j)).coord(i).clone())
                        .collect()
                })
                .collect();
            for v in linalg::nullspace(&m, idx.len()) {
                let mut e = self.zero();
                for (c, &j) in v.iter().zip(&idx) {
                    e.0[j] = c.clone();
                }
                // first nonzero coordinate normalized to one
                let lead = e.support().next().map(|i| e.coord(i).clone());
                if let Some(c) = lead {
                    e = e.scale(&c.recip());
                }
                out.push(e);
            }
        }
        out
    }

    /// Splits `v = v_f + [e, w]` with `v_f ∈ g^f` and returns `v_f`.
    pub fn project_f(&self, v: &Elem) -> Elem {
        let gf = self.g_f();
        let n = self.dim();
        let mut cols: Vec<Elem> = gf.clone();
        for j in 0..n {
            cols.push(self.bracket(&self.sl2.e, &self.basis(j)));
        }
        let a: Matrix = (0..n)
            .map(|i| cols.iter().map(|c| c.coord(i).clone()).collect())
            .collect();
        let sol = linalg::solve(&a, v.coords()).expect("g = g^f + [e, g]");
        let mut out = self.zero();
        for (c, b) in sol.iter().zip(&gf) {
            out.add_scaled(b, c);
        }
        out
    }

    /// The projection `♯` onto `g_f(0)`: the weight-zero part of [`Self::project_f`].
    pub fn sharp(&self, v: &Elem) -> Elem {
        self.project(&self.project_f(v), |g| g == HalfInt::ZERO)
    }

    /// Whether `f` is minimal: grades lie in `[-1, 1]` and `g(±1)` are one-dimensional.
    pub fn is_minimal(&self) -> bool {
        self.grading
            .iter()
            .all(|g| g.twice().abs() <= 2)
            && self.grading_component(HalfInt::ONE).len() == 1
            && self.grading_component(-HalfInt::ONE).len() == 1
    }

    /// Coefficient `c` with `v = c·e` for `v ∈ g(1)`.
    pub fn e_coefficient(&self, v: &Elem) -> Option<Q> {
        let e = &self.sl2.e;
        let i = e.support().next()?;
        let c = v.coord(i) / e.coord(i);
        (e.scale(&c) == *v).then_some(c)
    }

    /// `{z_α}` = basis of `g(1/2)`, `{z*_α}` normalized by `[z_α, z*_β] = -δ e`.
    pub fn minimal_data(&self) -> Option<MinimalData> {
        let idx = self.grading_component(HalfInt::HALF);
        let z: Vec<Elem> = idx.iter().map(|&i| self.basis(i)).collect();
        let m = z.len();
        let mut omega = linalg::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                omega[a][b] = self.e_coefficient(&self.bracket(&z[a], &z[b]))?;
            }
        }
        let inv = linalg::inverse(&omega)?;
        let z_star = (0..m)
            .map(|b| {
                let mut v = self.zero();
                for g in 0..m {
                    v.add_scaled(&z[g], &-inv[g][b].clone());
                }
                v
            })
            .collect();
        Some(MinimalData { z, z_star })
    }

    /// Label used for the W-generator whose leading term starts with basis element `i`.
    pub fn label_for(&self, v: &Elem) -> String {
        let i = v.support().next().unwrap_or(0);
        let name = self.space.name(i);
        self.labels
            .get(name)
            .cloned()
            .unwrap_or_else(|| format!("phi_{}", name))
    }

    pub fn labels(&self) -> &BTreeMap<String, String> {
        &self.labels
    }

    /// The linear polynomial `Σ c_i u_i` for an element.
    pub fn elem_poly(&self, v: &Elem) -> DiffPoly {
        self.elem_poly_in(&self.space, v, 0)
    }

    /// `∂ⁿ v` where the basis is embedded as the first generators of `space`.
    pub fn elem_poly_in(&self, space: &Arc<GeneratorSpace>, v: &Elem, order: u32) -> DiffPoly {
        let mut p = DiffPoly::zero(space);
        for i in v.support() {
            p.add_term(
                crate::diffpoly::Monomial::from_symbol(space.symbol(i, order)),
                Scalar::from_q(v.coord(i).clone()),
            );
        }
        p
    }

    pub fn render(&self, v: &Elem) -> String {
        self.elem_poly(v).to_string()
    }

    /// Parses a linear combination of basis names such as `F11 - 1/2 F12`.
    pub fn parse_elem(&self, src: &str) -> Result<Elem, AlgebraError> {
        let p = text::parse_diffpoly(&self.space, src).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        let mut v = self.zero();
        for (m, c) in p.terms() {
            let syms = m.symbols();
            let coeff = c.constant_value();
            match (syms, coeff) {
                ([s], Some(c)) if s.order == 0 => v.0[s.gen()] += c,
                _ => return Err(AlgebraError::Parse(format!("{} is not a linear element", src))),
            }
        }
        Ok(v)
    }

    /// The current-algebra bracket `{a λ b} = [a,b] + kλ(a|b)`.
    pub fn current_bracket(&self, k: &Scalar) -> LambdaBracket {
        let mut br = LambdaBracket::new(&self.space);
        let n = self.dim();
        for a in 0..n {
            for b in a..n {
                let mut v = LambdaPoly::constant(self.elem_poly(&self.brackets[a][b]));
                v.add_coeff(
                    1,
                    &DiffPoly::constant(&self.space, k * &Scalar::from_q(self.form[a][b].clone())),
                );
                br.define(a, b, v).expect("structure constants are skewsymmetric");
            }
        }
        br
    }

    /// Runs every axiom check and reports each one.
    pub fn check_axioms(&self) -> CheckReport {
        let mut rep = CheckReport::new(format!("axioms of {}", self.name));
        let n = self.dim();
        let nm = |i: usize| self.space.name(i).to_string();
        for a in 0..n {
            for b in 0..n {
                let sign = qi(-self.parity(a).koszul(self.parity(b)));
                let ok = self.brackets[a][b] == self.brackets[b][a].scale(&sign);
                let loc = format!("({}, {})", nm(a), nm(b));
                if ok {
                    rep.pass("skewsymmetry", loc);
                } else {
                    rep.fail("skewsymmetry", loc, "mismatch");
                }
            }
        }
        match self.first_jacobi_failure() {
            None => rep.pass("Jacobi identity", format!("all {} triples", n * n * n)),
            Some((a, b, c)) => rep.fail("Jacobi identity", format!("({}, {}, {})", nm(a), nm(b), nm(c)), "nonzero"),
        }
        match self.first_invariance_failure() {
            None => rep.pass("invariance of the form", format!("all {} triples", n * n * n)),
            Some((a, b, c)) => rep.fail("invariance of the form", format!("({}, {}, {})", nm(a), nm(b), nm(c)), "nonzero"),
        }
        rep.record(
            "nondegenerate form",
            "",
            (linalg::rank(&self.form) < n).then(|| "degenerate".to_string()),
        );
        match self.dual_bases() {
            Ok(d) => rep.record(
                "dual bases",
                "",
                (!d.pairing_is_identity(self)).then(|| "pairing is not the identity".into()),
            ),
            Err(e) => rep.fail("dual bases", "", e.to_string()),
        }
        let dims: usize = {
            let mut gs = self.grading.clone();
            gs.sort();
            gs.dedup();
            gs.iter().map(|g| self.grading_component(*g).len()).sum()
        };
        rep.record("grading", "", (dims != n).then(|| "components do not span".into()));
        let Sl2Triple { e, x, f } = &self.sl2;
        rep.record(
            "sl2 relations",
            "",
            (self.bracket(e, f) != x.scale(&qi(2))).then(|| "[e,f] != 2x".into()),
        );
        rep.record(
            "normalization (e|f) = 2(x|x) = 1",
            "",
            (!(self.form(e, f).is_one() && self.form(x, x) == q(1, 2))).then(|| "wrong normalization".into()),
        );
        rep
    }

    pub fn to_doc(&self) -> AlgebraDoc {
        let n = self.dim();
        let nm = |i: usize| self.space.name(i).to_string();
        let terms = |v: &Elem| -> Vec<TermDoc> {
            v.support()
                .map(|i| TermDoc {
                    coeff: RatDoc::from_q(v.coord(i)),
                    gen: nm(i),
                })
                .collect()
        };
        let mut brackets = Vec::new();
        let mut form = Vec::new();
        for a in 0..n {
            for b in a..n {
                if !self.brackets[a][b].is_zero() {
                    brackets.push(BracketDoc {
                        left: nm(a),
                        right: nm(b),
                        terms: terms(&self.brackets[a][b]),
                    });
                }
                if !self.form[a][b].is_zero() {
                    form.push(FormDoc {
                        a: nm(a),
                        b: nm(b),
                        value: RatDoc::from_q(&self.form[a][b]),
                    });
                }
            }
        }
        let elem_doc = |v: &Elem| -> ElemDoc {
            let s: Vec<usize> = v.support().collect();
            if s.len() == 1 && v.coord(s[0]).is_one() {
                ElemDoc::Name(nm(s[0]))
            } else {
                ElemDoc::Terms(terms(v))
            }
        };
        AlgebraDoc {
            name: self.name.clone(),
            generators: (0..n)
                .map(|i| GenDoc {
                    name: nm(i),
                    parity: self.parity(i).bit(),
                })
                .collect(),
            brackets,
            form,
            sl2: Sl2Doc {
                e: elem_doc(&self.sl2.e),
                x: elem_doc(&self.sl2.x),
                f: elem_doc(&self.sl2.f),
            },
            grading: Some(
                (0..n)
                    .map(|i| (nm(i), RatDoc::from_q(&self.grading[i].to_rational())))
                    .collect(),
            ),
            w_labels: if self.labels.is_empty() {
                None
            } else {
                Some(self.labels.clone())
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }
}

/// A rational written as an integer or a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatDoc {
    Int(i64),
    Str(String),
}

impl RatDoc {
    pub fn from_q(c: &Q) -> Self {
        if c.is_integer() {
            if let Ok(v) = i64::try_from(c.to_integer()) {
                return RatDoc::Int(v);
            }
        }
        RatDoc::Str(text::render_q(c))
    }

    pub fn to_q(&self) -> Result<Q, AlgebraError> {
        match self {
            RatDoc::Int(v) => Ok(qi(*v)),
            RatDoc::Str(s) => parse_rational(s),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Q, AlgebraError> {
    let s = s.trim();
    let bad = || AlgebraError::Parse(format!("bad rational {:?}", s));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenDoc {
    pub name: String,
    pub parity: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: RatDoc,
    pub gen: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketDoc {
    pub left: String,
    pub right: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormDoc {
    pub a: String,
    pub b: String,
    pub value: RatDoc,
}

/// A basis name or a linear combination of basis elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemDoc {
    Name(String),
    Terms(Vec<TermDoc>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sl2Doc {
    pub e: ElemDoc,
    pub x: ElemDoc,
    pub f: ElemDoc,
}

/// The algebra-definition file format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub name: String,
    pub generators: Vec<GenDoc>,
    #[serde(default)]
    pub brackets: Vec<BracketDoc>,
    pub form: Vec<FormDoc>,
    pub sl2: Sl2Doc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<BTreeMap<String, RatDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_labels: Option<BTreeMap<String, String>>,
}

impl AlgebraDoc {
    pub fn into_algebra(self) -> Result<LieSuperalgebra, AlgebraError> {
        let n = self.generators.len();
        let mut idx = BTreeMap::new();
        let mut generators = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let p = match g.parity {
                0 => Parity::Even,
                1 => Parity::Odd,
                other => return Err(AlgebraError::Parse(format!("parity {} of {}", other, g.name))),
            };
            if idx.insert(g.name.clone(), i).is_some() {
                return Err(AlgebraError::Parse(format!("duplicate generator {}", g.name)));
            }
            generators.push((g.name.clone(), p));
        }
        let look = |s: &str| {
            idx.get(s)
                .copied()
                .ok_or_else(|| AlgebraError::Parse(format!("unknown generator {:?}", s)))
        };
        let vec_of = |terms: &[TermDoc]| -> Result<Vec<Q>, AlgebraError> {
            let mut v = vec![Q::zero(); n];
            for t in terms {
                v[look(&t.gen)?] += t.coeff.to_q()?;
            }
            Ok(v)
        };
        let mut brackets = BTreeMap::new();
        for b in &self.brackets {
            let key = (look(&b.left)?, look(&b.right)?);
            if brackets.insert(key, vec_of(&b.terms)?).is_some() {
                return Err(AlgebraError::Parse(format!("bracket [{}, {}] given twice", b.left, b.right)));
            }
        }
        let mut form = BTreeMap::new();
        for f in &self.form {
            let key = (look(&f.a)?, look(&f.b)?);
            if form.insert(key, f.value.to_q()?).is_some() {
                return Err(AlgebraError::Parse(format!("form entry ({}, {}) given twice", f.a, f.b)));
            }
        }
        let elem_of = |d: &ElemDoc| -> Result<Vec<Q>, AlgebraError> {
            match d {
                ElemDoc::Name(s) => {
                    let mut v = vec![Q::zero(); n];
                    v[look(s)?] = Q::one();
                    Ok(v)
                }
                ElemDoc::Terms(t) => vec_of(t),
            }
        };
        let sl2 = (elem_of(&self.sl2.e)?, elem_of(&self.sl2.x)?, elem_of(&self.sl2.f)?);
        let grading = match &self.grading {
            None => None,
            Some(m) => {
                let mut g = vec![Q::zero(); n];
                let mut seen = vec![false; n];
                for (name, v) in m {
                    let i = look(name)?;
                    g[i] = v.to_q()?;
                    seen[i] = true;
                }
                if seen.iter().any(|s| !s) {
                    return Err(AlgebraError::Parse("grading must list every generator".into()));
                }
                Some(g)
            }
        };
        LieSuperalgebra::new(AlgebraData {
            name: self.name,
            generators,
            brackets,
            form,
            sl2,
            grading,
            labels: self.w_labels.unwrap_or_default(),
        })
    }
}

/// Parses and validates an algebra-definition document.
pub fn load_algebra(json: &str) -> Result<LieSuperalgebra, AlgebraError> {
    let doc: AlgebraDoc = serde_json::from_str(json).map_err(|e| AlgebraError::Parse(e.to_string()))?;
    doc.into_algebra()
}

/// A basis element of `gl(m|n)` given as a sparse supermatrix.
struct SuperMatrix {
    name: &'static str,
    entries: Vec<(usize, usize, i64)>,
}

fn sm(name: &'static str, entries: &[(usize, usize, i64)]) -> SuperMatrix {
    SuperMatrix {
        name,
        entries: entries.to_vec(),
    }
}

struct MatrixRealization {
    even: usize,
    size: usize,
}

impl MatrixRealization {
    fn is_odd_index(&self, i: usize) -> bool {
        i >= self.even
    }

    fn parity(&self, m: &Matrix) -> Option<Parity> {
        let mut p = None;
        for i in 0..self.size {
            for j in 0..self.size {
                if !m[i][j].is_zero() {
                    let q = Parity::from_bit((self.is_odd_index(i) != self.is_odd_index(j)) as u8);
                    if p.is_some_and(|old| old != q) {
                        return None;
                    }
                    p = Some(q);
                }
            }
        }
        p
    }

    fn dense(&self, s: &SuperMatrix) -> Matrix {
        let mut m = linalg::zeros(self.size, self.size);
        for &(i, j, v) in &s.entries {
            m[i][j] += qi(v);
        }
        m
    }

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let n = self.size;
        let mut c = linalg::zeros(n, n);
        for i in 0..n {
            for k in 0..n {
                if a[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !b[k][j].is_zero() {
                        c[i][j] += &a[i][k] * &b[k][j];
                    }
                }
            }
        }
        c
    }

    fn supertrace(&self, m: &Matrix) -> Q {
        (0..self.size)
            .map(|i| {
                if self.is_odd_index(i) {
                    -m[i][i].clone()
                } else {
                    m[i][i].clone()
                }
            })
            .sum()
    }
}

fn from_supermatrices(
    name: &str,
    real: MatrixRealization,
    basis: Vec<SuperMatrix>,
    sl2: [&[(&str, Q)]; 3],
    labels: &[(&str, &str)],
) -> LieSuperalgebra {
    let n = basis.len();
    let mats: Vec<Matrix> = basis.iter().map(|b| real.dense(b)).collect();
    let pars: Vec<Parity> = mats
        .iter()
        .map(|m| real.parity(m).expect("homogeneous basis matrix"))
        .collect();
    // flattened basis for decomposing brackets
    let flat: Matrix = (0..real.size * real.size)
        .map(|r| mats.iter().map(|m| m[r / real.size][r % real.size].clone()).collect())
        .collect();
    let mut brackets = BTreeMap::new();
    for a in 0..n {
        for b in a..n {
            let ab = real.mul(&mats[a], &mats[b]);
            let ba = real.mul(&mats[b], &mats[a]);
            let sign = qi(pars[a].koszul(pars[b]));
            let c: Vec<Q> = (0..real.size * real.size)
                .map(|r| {
                    let (i, j) = (r / real.size, r % real.size);
                    &ab[i][j] - &(&ba[i][j] * &sign)
                })
                .collect();
            let coords = linalg::solve(&flat, &c).expect("basis closes under the supercommutator");
            brackets.insert((a, b), coords);
        }
    }
    let idx = |s: &str| basis.iter().position(|b| b.name == s).expect("sl2 name");
    let combo = |terms: &[(&str, Q)]| -> Vec<Q> {
        let mut v = vec![Q::zero(); n];
        for (s, c) in terms {
            v[idx(s)] += c;
        }
        v
    };
    let (e, x, f) = (combo(sl2[0]), combo(sl2[1]), combo(sl2[2]));
    let to_mat = |v: &Vec<Q>| -> Matrix {
        let mut m = linalg::zeros(real.size, real.size);
        for (c, b) in v.iter().zip(&mats) {
            for i in 0..real.size {
                for j in 0..real.size {
                    m[i][j] += c * &b[i][j];
                }
            }
        }
        m
    };
    // scale the supertrace form so that (e|f) = 1
    let scale = real.supertrace(&real.mul(&to_mat(&e), &to_mat(&f))).recip();
    let mut form = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            let v = real.supertrace(&real.mul(&mats[a], &mats[b])) * &scale;
            if !v.is_zero() {
                form.insert((a, b), v);
            }
        }
    }
    LieSuperalgebra::new(AlgebraData {
        name: name.to_string(),
        generators: basis.iter().zip(&pars).map(|(b, p)| (b.name.to_string(), *p)).collect(),
        brackets,
        form,
        sl2: (e, x, f),
        grading: None,
        labels: labels.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    })
    .expect("built-in algebra is valid")
}

/// Names accepted by [`builtin`].
pub const BUILTINS: [&str; 3] = ["sl(2)", "spo(2|1)", "spo(2|3)"];

pub fn builtin(name: &str) -> Result<LieSuperalgebra, AlgebraError> {
    match name {
        "sl(2)" | "sl2" => Ok(sl2()),
        "spo(2|1)" | "spo21" => Ok(spo21()),
        "spo(2|3)" | "spo23" => Ok(spo23()),
        _ => Err(AlgebraError::UnknownBuiltin(name.to_string())),
    }
}

fn sl2() -> LieSuperalgebra {
    from_supermatrices(
        "sl(2)",
        MatrixRealization { even: 2, size: 2 },
        vec![
            sm("e", &[(0, 1, 1)]),
            sm("h", &[(0, 0, 1), (1, 1, -1)]),
            sm("f", &[(1, 0, 1)]),
        ],
        [&[("e", qi(1))], &[("h", q(1, 2))], &[("f", qi(1))]],
        &[("f", "phi_f")],
    )
}

/// `spo(2|1) ⊂ gl(2|1)`: even indices 0, 1 and odd index 2.
fn spo21() -> LieSuperalgebra {
    from_supermatrices(
        "spo(2|1)",
        MatrixRealization { even: 2, size: 3 },
        vec![
            sm("e_ev", &[(0, 1, 1)]),
            sm("e_od", &[(0, 2, 1), (2, 1, 1)]),
            sm("h", &[(0, 0, 1), (1, 1, -1)]),
            sm("f_od", &[(1, 2, 1), (2, 0, -1)]),
            sm("f_ev", &[(1, 0, 1)]),
        ],
        [&[("e_ev", qi(1))], &[("h", q(1, 2))], &[("f_ev", qi(1))]],
        &[("f_od", "phi_od"), ("f_ev", "phi_ev")],
    )
}

/// `spo(2|3) ⊂ gl(2|3)`: even indices 0, 1 and odd indices 2, 3, 4 (`1̄, 2̄, 3̄`).
fn spo23() -> LieSuperalgebra {
    from_supermatrices(
        "spo(2|3)",
        MatrixRealization { even: 2, size: 5 },
        vec![
            sm("H1", &[(0, 0, 1), (1, 1, -1)]),
            sm("H2", &[(2, 2, 1), (3, 3, -1)]),
            sm("E11", &[(2, 0, 1), (1, 3, -1)]),
            sm("E12", &[(4, 1, 1), (0, 4, 1)]),
            sm("E21", &[(0, 1, 1)]),
            sm("E22", &[(2, 4, 1), (4, 3, -1)]),
            sm("E3", &[(2, 1, 1), (0, 3, 1)]),
            sm("F11", &[(0, 2, 1), (3, 1, 1)]),
            sm("F12", &[(4, 0, 1), (1, 4, -1)]),
            sm("F21", &[(1, 0, 1)]),
            sm("F22", &[(3, 4, 1), (4, 2, -1)]),
            sm("F3", &[(3, 0, 1), (1, 2, -1)]),
        ],
        [
            &[("E21", qi(1)), ("E22", qi(1))],
            &[("H1", q(1, 2)), ("H2", qi(1))],
            &[("F21", qi(1)), ("F22", qi(-2))],
        ],
        &[("F11", "phi_1"), ("F21", "phi_21"), ("F22", "phi_22"), ("F3", "phi_3")],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spo21_structure() {
        let g = spo21();
        let b = |s: &str| g.named(s);
        assert_eq!(g.bracket(&b("e_od"), &b("f_od")), -&b("h"));
        assert_eq!(g.bracket(&b("f_od"), &b("e_od")), -&b("h"));
        assert_eq!(g.bracket(&b("e_od"), &b("e_od")), b("e_ev").scale(&qi(2)));
        assert_eq!(g.bracket(&b("f_od"), &b("f_od")), b("f_ev").scale(&qi(-2)));
        assert_eq!(g.bracket(&b("e_od"), &b("f_ev")), -&b("f_od"));
        assert_eq!(g.bracket(&b("f_od"), &b("e_ev")), -&b("e_od"));
        assert_eq!(g.form(&b("h"), &b("h")), qi(2));
        assert_eq!(g.form(&b("e_od"), &b("f_od")), qi(-2));
        assert_eq!(g.grading_component(-HalfInt::HALF), vec![g.index("f_od").unwrap()]);
        assert!(g.is_minimal());
    }

    #[test]
    fn spo23_structure() {
        let g = spo23();
        let b = |s: &str| g.named(s);
        assert_eq!(g.form(&b("E11"), &b("F11")), q(2, 3));
        assert_eq!(g.form(&b("E12"), &b("F12")), q(-2, 3));
        assert_eq!(g.grading_component(HalfInt::from_twice(3)), vec![g.index("E3").unwrap()]);
        assert_eq!(g.g_f().len(), 4);
        assert!(!g.is_minimal());
    }

    #[test]
    fn doc_roundtrip() {
        for name in BUILTINS {
            let g = builtin(name).unwrap();
            let h = load_algebra(&g.to_json()).unwrap();
            assert_eq!(h.to_json(), g.to_json());
        }
    }
}
