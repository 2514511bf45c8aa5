//! Fock-space realizations of the Virasoro Verma module.
//!
//! All four realizations act on polynomials in coordinates `c_k` of weight
//! `k`, with the monomial `∏ c_{λ_i}` indexed by the partition `λ`:
//!
//! * `OE`: sections, by first-order operators `L_p = ∂_p + Σ (k+1) c_k ∂_{k+p}`,
//!   closed forms for `L_0, L_{-1}, L_{-2}` and `L_{-n} = ad^{n-2}(L_{-1}) L_{-2} / (n-2)!`.
//! * `FE`: functionals; each closed form is the factorial-pairing transpose of
//!   the `OE` mode of opposite sign, `L_n = (-1)^n/(n-2)! ad^{n-2}(L_1) L_2` beyond.
//! * `OEc`: the `h = 0` sections over the base, in `c_2, c_3, …`, with the
//!   correction field `Γ = 2 Σ c_k ∂_{k+1} + Σ c_i c_j ∂_{i+j+1}`.
//! * `Wc`: the transpose of `OEc`.
//!
//! The pairing is `⟨c^a, c^b⟩ = a! δ_{ab}` with `a! = ∏ a_k!`. Matrix entries are
//! polynomials in `h` and `c`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::rational::factorial;
use crate::exactalg::{
    bareiss_det, int, rank, rat, ExactDiv, MPoly, Matrix, Monomial, Rational, Ring, ToJson, TruncSeries, Var,
};
use crate::graded::GradedMap;
use crate::params;
use crate::partitions::{partition_count, partitions, partitions_min_part, Partition};
use crate::report::{RelationCheck, SuiteReport};
use crate::virasoro::VermaModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RealizationTag {
    OE,
    FE,
    OEc,
    Wc,
}

impl RealizationTag {
    pub const ALL: [RealizationTag; 4] = [RealizationTag::OE, RealizationTag::FE, RealizationTag::OEc, RealizationTag::Wc];

    /// Smallest admissible coordinate index.
    pub fn min_part(self) -> u32 {
        match self {
            RealizationTag::OE | RealizationTag::FE => 1,
            RealizationTag::OEc | RealizationTag::Wc => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RealizationTag::OE => "OE",
            RealizationTag::FE => "FE",
            RealizationTag::OEc => "OEc",
            RealizationTag::Wc => "Wc",
        }
    }
}

impl std::str::FromStr for RealizationTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RealizationTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown realization {s:?}")))
    }
}

/// Weighted-degree components of `Q[c_m, c_{m+1}, …]` up to degree `top`.
#[derive(Debug)]
pub struct FockSpace {
    min_part: u32,
    top: usize,
    bases: Vec<Vec<Partition>>,
    index: Vec<HashMap<Partition, usize>>,
    dims: Arc<Vec<usize>>,
}

fn is_coord(v: Var) -> bool {
    v.coord_index().is_some()
}

/// Partition of a monomial in the coordinates, largest part first.
pub fn monomial_partition(m: &Monomial) -> Partition {
    let mut p: Partition = Vec::new();
    for &(v, e) in m.pairs() {
        if let Some(k) = v.coord_index() {
            p.extend(std::iter::repeat(k as u32).take(e as usize));
        }
    }
    p.sort_unstable_by(|a, b| b.cmp(a));
    p
}

pub fn partition_monomial(lambda: &[u32]) -> Monomial {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &k in lambda {
        *counts.entry(k).or_default() += 1;
    }
    Monomial::from_pairs(counts.into_iter().map(|(k, e)| (Var::coord(k as usize), e)).collect())
}

/// `a! = ∏ a_k!` for the exponent vector of the monomial `λ`.
pub fn factorial_weight(lambda: &[u32]) -> Rational {
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    for &k in lambda {
        *counts.entry(k).or_default() += 1;
    }
    counts.values().fold(int(1), |acc, &e| acc * Rational::from_integer(factorial(e)))
}

impl FockSpace {
    pub fn new(min_part: u32, top: usize) -> Self {
        let bases: Vec<Vec<Partition>> = (0..=top as u32).map(|d| partitions_min_part(d, min_part)).collect();
        let index = bases.iter().map(|b| b.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()).collect();
        let dims = Arc::new(bases.iter().map(Vec::len).collect());
        FockSpace { min_part, top, bases, index, dims }
    }

    pub fn for_tag(tag: RealizationTag, top: usize) -> Self {
        FockSpace::new(tag.min_part(), top)
    }

    pub fn min_part(&self) -> u32 {
        self.min_part
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn dims(&self) -> Arc<Vec<usize>> {
        self.dims.clone()
    }

    pub fn basis(&self, d: usize) -> &[Partition] {
        &self.bases[d]
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        let d = lambda.iter().sum::<u32>() as usize;
        self.index.get(d)?.get(lambda).copied()
    }

    pub fn monomial(&self, lambda: &[u32]) -> MPoly {
        MPoly::term(int(1), partition_monomial(lambda))
    }

    /// Diagonal matrix of the factorial pairing on component `d`.
    pub fn pairing(&self, d: usize) -> Matrix<Rational> {
        Matrix::diagonal(self.bases[d].iter().map(|p| factorial_weight(p)).collect())
    }

    /// Whether every coordinate of `p` is admissible here.
    pub fn is_admissible(&self, p: &MPoly) -> bool {
        p.vars().into_iter().all(|v| match v.coord_index() {
            Some(k) => k as u32 >= self.min_part && k <= self.top,
            None => true,
        })
    }

    /// Coordinates of a weighted-homogeneous polynomial of degree `d`, with
    /// coefficients in `h` and `c`.
    pub fn expand(&self, p: &MPoly, d: usize) -> Result<Vec<MPoly>> {
        let mut out = vec![MPoly::zero(); self.bases[d].len()];
        for (m, q) in p.terms() {
            let (coord, param) = m.partition_by(is_coord);
            let lambda = monomial_partition(&coord);
            if lambda.iter().sum::<u32>() as usize != d {
                return Err(Error::Dimension(format!("term {m} is not of weight {d}")));
            }
            let i = self.index[d].get(&lambda).ok_or_else(|| {
                Error::Inadmissible(format!("monomial {coord} uses a coordinate outside c_{}..c_{}", self.min_part, self.top))
            })?;
            out[*i].add_term(param, q);
        }
        Ok(out)
    }

    pub fn from_dense(&self, d: usize, v: &[MPoly]) -> MPoly {
        let mut p = MPoly::zero();
        for (lambda, x) in self.bases[d].iter().zip(v) {
            p = &p + &(x * &self.monomial(lambda));
        }
        p
    }
}

/// First-order operator `Σ_k V_k ∂_k + μ`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FieldOp {
    pub field: BTreeMap<usize, MPoly>,
    pub mult: MPoly,
}

impl FieldOp {
    pub fn multiplication(mult: MPoly) -> Self {
        FieldOp { field: BTreeMap::new(), mult }
    }

    fn add_field(&mut self, k: usize, v: &MPoly) {
        if v.is_zero() {
            return;
        }
        let e = self.field.entry(k).or_insert_with(MPoly::zero);
        *e = &*e + v;
        if e.is_zero() {
            self.field.remove(&k);
        }
    }

    fn add_scaled_field(&mut self, f: &BTreeMap<usize, MPoly>, s: &MPoly) {
        for (&k, v) in f {
            self.add_field(k, &(v * s));
        }
    }

    pub fn apply(&self, p: &MPoly) -> MPoly {
        let mut out = &self.mult * p;
        for (&k, v) in &self.field {
            let d = p.derivative(Var::coord(k));
            if !d.is_zero() {
                out = &out + &(v * &d);
            }
        }
        out
    }

    /// Sets `c_1 = 0` in every coefficient.
    pub fn restrict_c1(&self) -> FieldOp {
        let zero = |v: Var| (v == Var::coord(1)).then(|| int(0));
        let mut out = FieldOp { field: BTreeMap::new(), mult: self.mult.eval_partial(&zero) };
        for (&k, v) in &self.field {
            out.add_field(k, &v.eval_partial(&zero));
        }
        out
    }

    pub fn to_graded(&self, space: &FockSpace, shift: i64) -> Result<GradedMap<MPoly>> {
        let mut err = None;
        let map = GradedMap::build(space.dims(), shift, |d| {
            let t = (d as i64 + shift) as usize;
            let mut m = Matrix::zeros(space.dims[t], space.dims[d]);
            for (j, lambda) in space.basis(d).iter().enumerate() {
                match space.expand(&self.apply(&space.monomial(lambda)), t) {
                    Ok(col) => {
                        for (i, x) in col.into_iter().enumerate() {
                            m.set(i, j, x);
                        }
                    }
                    Err(e) => {
                        err.get_or_insert(e);
                    }
                }
            }
            Some(m)
        });
        match err {
            Some(e) => Err(e),
            None => Ok(map),
        }
    }
}

fn coord(k: usize) -> MPoly {
    MPoly::coord(k)
}

fn cst(n: i64) -> MPoly {
    MPoly::int(n)
}

/// `b_k`, the coefficient of `z^k` in `1/(z f(z))` for `f = z + Σ c_j z^{j+1}`;
/// entry `i` holds `b_{i-2}` for `-2 ≤ k ≤ n`.
pub fn b_coeffs(n: usize) -> Vec<MPoly> {
    let g = TruncSeries::new(Var::Z, 0, (0..=n + 2).map(|j| if j == 0 { MPoly::one() } else { coord(j) }).collect(), Some(n as i64 + 2));
    let inv = g.invert().expect("unit constant term");
    (0..=n as i64 + 2).map(|e| inv.coefficient(e).expect("within order")).collect()
}

/// `ĉ_k`, the coefficient of `z^{k+1}` in `f/(1 + c_1 f)`.
pub fn chat_poly(k: usize) -> MPoly {
    let top = k as i64 + 1;
    let f = TruncSeries::new(Var::Z, 1, (0..=k).map(|j| if j == 0 { MPoly::one() } else { coord(j) }).collect(), Some(top));
    let den = TruncSeries::constant(Var::Z, MPoly::one()).add(&f.scale(&coord(1)));
    let g = f.mul(&den.invert().expect("unit constant term"));
    g.coefficient(top).expect("within order")
}

/// Multiplication by `ĉ_k` on the full coordinate space up to degree `top`.
pub fn mult_chat(k: usize, top: usize) -> Result<GradedMap<MPoly>> {
    if k < 2 || k > top {
        return Err(Error::OutOfRange(format!("ĉ_k needs 2 ≤ k ≤ {top}, got {k}")));
    }
    FieldOp::multiplication(chat_poly(k)).to_graded(&FockSpace::new(1, top), k as i64)
}

/// Closed-form `OE` generator for `n ≥ -2`.
pub fn oe_field(n: i64, top: usize) -> FieldOp {
    let h = MPoly::var(Var::H);
    let c = MPoly::var(Var::C);
    let mut op = FieldOp::default();
    match n {
        p if p >= 1 => {
            let p = p as usize;
            op.add_field(p, &MPoly::one());
            for k in 1..=top.saturating_sub(p) {
                op.add_field(k + p, &coord(k).scale(&int(k as i64 + 1)));
            }
        }
        0 => {
            for k in 1..=top {
                op.add_field(k, &coord(k).scale(&int(k as i64)));
            }
            op.mult = h;
        }
        -1 => {
            for k in 1..top {
                let v = &coord(k + 1).scale(&int(k as i64 + 2)) - &(&coord(1) * &coord(k)).scale(&int(2));
                op.add_field(k, &v);
            }
            op.mult = &h.scale(&int(2)) * &coord(1);
        }
        -2 => {
            let b = b_coeffs(top);
            let q = &coord(2).scale(&int(4)) - &(&coord(1) * &coord(1));
            for k in 1..top.saturating_sub(1) {
                let v = &(&coord(k + 2).scale(&int(k as i64 + 3)) - &(&q * &coord(k))) - &b[k + 2];
                op.add_field(k, &v);
            }
            op.mult = &(&h * &q) + &(&c * &(&coord(2) - &(&coord(1) * &coord(1)))).scale(&rat(1, 2));
        }
        _ => panic!("no closed form for L_{n}"),
    }
    op
}

/// `Γ = 2 Σ_{k≥2} c_k ∂_{k+1} + Σ_{i,j≥2} c_i c_j ∂_{i+j+1}`.
pub fn gamma_field(top: usize) -> BTreeMap<usize, MPoly> {
    let mut op = FieldOp::default();
    for k in 2..top {
        op.add_field(k + 1, &coord(k).scale(&int(2)));
    }
    for i in 2..top {
        for j in 2..top {
            if i + j < top {
                op.add_field(i + j + 1, &(&coord(i) * &coord(j)));
            }
        }
    }
    op.field
}

/// Closed-form `OEc` generator for `n ≥ -2`.
pub fn oec_field(n: i64, top: usize) -> FieldOp {
    let c = MPoly::var(Var::C);
    let mut op = FieldOp::default();
    let gamma = gamma_field(top);
    match n {
        p if p >= 2 => {
            let p = p as usize;
            op.add_field(p, &MPoly::one());
            for k in 2..=top.saturating_sub(p) {
                op.add_field(k + p, &coord(k).scale(&int(k as i64 + 1)));
            }
        }
        1 => {
            for k in 2..top {
                op.add_field(k + 1, &coord(k).scale(&int(k as i64 + 1)));
            }
            op.add_scaled_field(&gamma, &cst(-1));
        }
        0 => {
            for k in 2..=top {
                op.add_field(k, &coord(k).scale(&int(k as i64)));
            }
        }
        -1 => {
            for k in 2..top {
                op.add_field(k, &coord(k + 1).scale(&int(k as i64 + 2)));
            }
            op.add_scaled_field(&gamma, &coord(2).scale(&int(-3)));
        }
        -2 => {
            let b = b_coeffs(top);
            let zero = |v: Var| (v == Var::coord(1)).then(|| int(0));
            for k in 2..top.saturating_sub(1) {
                let v = &(&coord(k + 2).scale(&int(k as i64 + 3)) - &(&coord(2) * &coord(k)).scale(&int(4)))
                    - &b[k + 2].eval_partial(&zero);
                op.add_field(k, &v);
            }
            op.add_scaled_field(&gamma, &coord(3).scale(&int(-5)));
            op.mult = (&c * &coord(2)).scale(&rat(1, 2));
        }
        _ => panic!("no closed form for L_{n}"),
    }
    op
}

/// Factorial-pairing transpose: a map of shift `s` on sections gives the map
/// of shift `-s` on functionals with `⟨D φ, x⟩ = ⟨φ, A x⟩`.
pub fn pairing_dual<T: Ring>(space: &FockSpace, a: &GradedMap<T>) -> GradedMap<T> {
    let s = a.shift();
    GradedMap::build(space.dims(), -s, |d| {
        let src = (d as i64 - s) as usize;
        let block = a.block(src)?;
        let p_src = space.pairing(src);
        let p_d = space.pairing(d);
        Some(Matrix::from_fn(block.cols(), block.rows(), |i, j| {
            let w = p_d.get(j, j) / p_src.get(i, i);
            block.get(j, i).scaled(&w)
        }))
    })
}

/// The generators of one realization for modes `|n| ≤ reach`, as matrices with
/// entries polynomial in `h` and `c`.
#[derive(Clone, Debug)]
pub struct FockRealization<T> {
    tag: RealizationTag,
    space: Arc<FockSpace>,
    modes: BTreeMap<i64, GradedMap<T>>,
}

fn nth_ad<T: Ring>(x: &GradedMap<T>, y: &GradedMap<T>, times: usize) -> GradedMap<T> {
    (0..times).fold(y.clone(), |acc, _| x.commutator(&acc))
}

fn fact_inv(n: usize) -> Rational {
    int(1) / Rational::from_integer(factorial(n as u32))
}

impl FockRealization<MPoly> {
    pub fn new(tag: RealizationTag, top: usize, reach: i64) -> Result<Self> {
        let space = Arc::new(FockSpace::for_tag(tag, top));
        let reach = reach.max(2);
        let mut modes = BTreeMap::new();
        match tag {
            RealizationTag::OE | RealizationTag::OEc => {
                let field = |n| if tag == RealizationTag::OE { oe_field(n, top) } else { oec_field(n, top) };
                for n in -2..=reach {
                    modes.insert(n, field(n).to_graded(&space, -n)?);
                }
                for n in 3..=reach {
                    let x = nth_ad(&modes[&-1], &modes[&-2], n as usize - 2);
                    modes.insert(-n, x.scale(&MPoly::constant(fact_inv(n as usize - 2))));
                }
            }
            RealizationTag::FE | RealizationTag::Wc => {
                let base = if tag == RealizationTag::FE { RealizationTag::OE } else { RealizationTag::OEc };
                let field = |n| if base == RealizationTag::OE { oe_field(n, top) } else { oec_field(n, top) };
                for n in -2..=reach {
                    let dual = pairing_dual(&space, &field(n).to_graded(&space, -n)?);
                    modes.insert(-n, dual);
                }
                for n in 3..=reach {
                    let x = nth_ad(&modes[&1], &modes[&2], n as usize - 2);
                    let sign = if n % 2 == 0 { int(1) } else { int(-1) };
                    modes.insert(n, x.scale(&MPoly::constant(sign * fact_inv(n as usize - 2))));
                }
            }
        }
        modes.retain(|n, _| n.abs() <= reach);
        Ok(FockRealization { tag, space, modes })
    }

    /// Specializes `h` and `c`.
    pub fn at(&self, h: &Rational, c: &Rational) -> FockRealization<Rational> {
        self.map_entries(|p| crate::virasoro::eval_hc(p, h, c))
    }
}

impl<T: Ring> FockRealization<T> {
    pub fn tag(&self) -> RealizationTag {
        self.tag
    }

    pub fn space(&self) -> &Arc<FockSpace> {
        &self.space
    }

    pub fn dims(&self) -> Arc<Vec<usize>> {
        self.space.dims()
    }

    pub fn reach(&self) -> i64 {
        *self.modes.keys().next_back().unwrap()
    }

    pub fn mode(&self, n: i64) -> Result<&GradedMap<T>> {
        self.modes.get(&n).ok_or_else(|| Error::OutOfRange(format!("mode {n} beyond reach {}", self.reach())))
    }

    pub fn map_entries<U: Ring>(&self, f: impl Fn(&T) -> U) -> FockRealization<U> {
        FockRealization {
            tag: self.tag,
            space: self.space.clone(),
            modes: self.modes.iter().map(|(&n, m)| (n, m.map_entries(&f))).collect(),
        }
    }

    /// `L_{-λ_m} ⋯ L_{-λ_1}` applied to the vacuum, as coordinates on level `|λ|`.
    pub fn word_on_vacuum(&self, lambda: &[u32]) -> Result<Vec<T>> {
        let mut v = vec![T::one()];
        let mut level = 0usize;
        for &part in lambda {
            let m = self.mode(-i64::from(part))?;
            v = m.apply(level, &v).ok_or_else(|| Error::OutOfRange(format!("level {} beyond truncation", level + part as usize)))?;
            level += part as usize;
        }
        Ok(v)
    }
}

/// One generator of a realization.
pub fn fock_operator(n: i64, tag: RealizationTag, top: usize) -> Result<GradedMap<MPoly>> {
    Ok(FockRealization::new(tag, top, n.abs())?.mode(n)?.clone())
}

fn central(n: i64) -> MPoly {
    MPoly::var(Var::C).scale(&rat(n * n * n - n, 12))
}

/// Virasoro relations `[L_n, L_m] = (n-m) L_{n+m} + (c/12)(n³-n) δ_{n+m,0}` for `|n|, |m| ≤ max_mode`.
pub fn verify_fock_relations(tag: RealizationTag, max_mode: i64, top: usize) -> Result<SuiteReport> {
    if (top as i64) < 2 * max_mode {
        return Err(Error::OutOfRange(format!("truncation {top} is below 2·{max_mode}")));
    }
    let r = FockRealization::new(tag, top, 2 * max_mode)?;
    let dims = r.dims();
    let mut checks = Vec::new();
    for n in -max_mode..=max_mode {
        for m in n + 1..=max_mode {
            let mut rhs = r.mode(n + m)?.scale(&MPoly::int(n - m));
            if n + m == 0 {
                rhs = rhs.add(&GradedMap::scalar(dims.clone(), central(n)));
            }
            let diff = r.mode(n)?.commutator(r.mode(m)?).sub(&rhs);
            checks.push(RelationCheck::vanishing(format!("[L_{n},L_{m}]"), &diff));
        }
    }
    match tag {
        RealizationTag::FE => {
            let printed = printed_fe_creation(1, &r.space)?;
            let diff = r.mode(1)?.commutator(&printed).sub(&r.mode(0)?.scale(&MPoly::int(2)));
            checks.push(RelationCheck::recorded("[L_1,L_-1] with L_-1 = c_1 + Σ c_{k+1}∂_k", &diff));
        }
        RealizationTag::OEc => {
            let mut op = FieldOp::default();
            for k in 2..=top {
                op.add_field(k, &coord(k));
            }
            let printed = op.to_graded(&r.space, 0)?;
            let diff = printed.commutator(r.mode(2)?).add(&r.mode(2)?.scale(&MPoly::int(2)));
            checks.push(RelationCheck::recorded("[L_0,L_2] = -2L_2 with L_0 = Σ c_k∂_k", &diff));
        }
        _ => {}
    }
    Ok(SuiteReport::new(
        format!("fock-relations/{}", tag.name()),
        params! { "realization" => tag.name(), "max_mode" => max_mode, "truncation" => top },
        checks,
    ))
}

/// `c_p + Σ c_{k+p} ∂_k` on functionals, without the `(k+1)` weights.
pub fn printed_fe_creation(p: usize, space: &FockSpace) -> Result<GradedMap<MPoly>> {
    let mut op = FieldOp::multiplication(coord(p));
    for k in 1..=space.top().saturating_sub(p) {
        op.add_field(k, &coord(k + p));
    }
    op.to_graded(space, p as i64)
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "")]
pub struct PbwFockReport<T: Ring + ToJson> {
    pub level: u32,
    /// Level-wise matrices; column `λ` holds the coordinates of `L_{-λ}·1`.
    pub intertwiner: Vec<Matrix<T>>,
    #[serde(serialize_with = "ser_vec")]
    pub determinants: Vec<T>,
    pub intertwines: bool,
    pub gram_matches: bool,
    pub bijective: bool,
    pub passed: bool,
}

fn ser_vec<T: ToJson, S: serde::Serializer>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(ToJson::to_json).collect::<Vec<_>>().serialize(s)
}

fn word_matrix<T: Ring>(r: &FockRealization<T>, d: u32) -> Result<Matrix<T>> {
    let cols = partitions(d).iter().map(|l| r.word_on_vacuum(l)).collect::<Result<Vec<_>>>()?;
    let rows = r.dims()[d as usize];
    Ok(Matrix::from_fn(rows, cols.len(), |i, j| cols[j][i].clone()))
}

fn pbw_to_fock_in<T: ExactDiv + ToJson>(n: u32, fe: &FockRealization<T>, oe: &FockRealization<T>, verma: &VermaModule<T>) -> Result<PbwFockReport<T>> {
    let maps = (0..=n).map(|d| word_matrix(fe, d)).collect::<Result<Vec<_>>>()?;
    let sections = (0..=n).map(|d| word_matrix(oe, d)).collect::<Result<Vec<_>>>()?;
    let mut intertwines = true;
    for k in -2..=n as i64 {
        for d in 0..=n as i64 {
            let t = d + k;
            if t < 0 || t > n as i64 {
                continue;
            }
            let lhs = maps[t as usize].mul(&verma.mode_matrix(k, d as u32));
            let rhs = fe.mode(-k)?.block(d as usize).expect("within truncation").mul(&maps[d as usize]);
            intertwines &= lhs == rhs;
        }
    }
    let mut gram_matches = true;
    for d in 0..=n {
        let p = fe.space().pairing(d as usize).map(|q| T::from_rational(q));
        let pulled = maps[d as usize].transpose().mul(&p).mul(&sections[d as usize]);
        gram_matches &= pulled == verma.gram(d);
    }
    let determinants = maps.iter().map(bareiss_det).collect::<Result<Vec<_>>>()?;
    let bijective = determinants.iter().all(|x| !x.is_zero());
    Ok(PbwFockReport {
        level: n,
        intertwiner: maps,
        determinants,
        intertwines,
        gram_matches,
        bijective,
        passed: intertwines && gram_matches && bijective,
    })
}

fn pbw_realizations(n: u32) -> Result<(FockRealization<MPoly>, FockRealization<MPoly>)> {
    let top = n.max(2) as usize;
    Ok((FockRealization::new(RealizationTag::FE, top, top as i64)?, FockRealization::new(RealizationTag::OE, top, top as i64)?))
}

/// `e_λ v ↦ L_{-λ}·1` into functionals, symbolic in `h` and `c`.
pub fn pbw_to_fock_symbolic(n: u32) -> Result<PbwFockReport<MPoly>> {
    let (fe, oe) = pbw_realizations(n)?;
    pbw_to_fock_in(n, &fe, &oe, &crate::virasoro::symbolic_module())
}

pub fn pbw_to_fock(n: u32, h: &Rational, c: &Rational) -> Result<PbwFockReport<Rational>> {
    let (fe, oe) = pbw_realizations(n)?;
    pbw_to_fock_in(n, &fe.at(h, c), &oe.at(h, c), &VermaModule::new(h.clone(), c.clone()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WcLevel {
    pub level: u32,
    pub verma_dim: u64,
    pub wc_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WcReport {
    #[serde(serialize_with = "crate::virasoro::ser_json")]
    pub c: Rational,
    pub levels: Vec<WcLevel>,
    pub module_map: bool,
    pub surjective: bool,
    pub passed: bool,
}

/// The surjection `V_{0,c} → W_c`, `e_λ v ↦ L_{-λ}·1`.
pub fn wc_quotient_check(c: &Rational, max_level: u32) -> Result<WcReport> {
    let top = max_level.max(2) as usize;
    let wc = FockRealization::new(RealizationTag::Wc, top, top as i64)?.at(&int(0), c);
    let verma = VermaModule::new(int(0), c.clone());
    let maps = (0..=max_level).map(|d| word_matrix(&wc, d)).collect::<Result<Vec<_>>>()?;
    let mut module_map = true;
    for k in -2..=max_level as i64 {
        for d in 0..=max_level as i64 {
            let t = d + k;
            if t < 0 || t > max_level as i64 {
                continue;
            }
            let lhs = maps[t as usize].mul(&verma.mode_matrix(k, d as u32));
            let rhs = wc.mode(-k)?.block(d as usize).expect("within truncation").mul(&maps[d as usize]);
            module_map &= lhs == rhs;
        }
    }
    let levels: Vec<WcLevel> = maps
        .iter()
        .enumerate()
        .map(|(d, m)| {
            let r = if m.rows() == 0 { 0 } else { rank(m) };
            WcLevel { level: d as u32, verma_dim: partition_count(d as u32), wc_dim: m.rows(), rank: r, kernel_dim: m.cols() - r }
        })
        .collect();
    let surjective = levels.iter().all(|l| l.rank == l.wc_dim);
    Ok(WcReport { c: c.clone(), passed: module_map && surjective, levels, module_map, surjective })
}
