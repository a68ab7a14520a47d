//! Spectra of Hamming graphs `H(n,q,d)` and composition graphs
//! `H_C(n,G,d)`, with the identities of the Bose-Mesner algebra used as
//! independent checks.
//!
//! Both families are Cayley graphs on `G^n`, so every character `phi_x` is
//! an eigenvector and the eigenvalue depends only on the weight (Hamming)
//! or composition (composition scheme) of `x`. A [`Spectrum`] therefore has
//! one entry per shell of characters. Multiplicities are per shell: when two
//! shells share an eigenvalue they stay separate entries.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{binom, pow_int, CycInt, ExactInt, ExactRational, RootSum, DEFAULT_BITS};
use crate::groups::{
    comp, enumerate_compositions, enumerate_shell, weight, Composition, GroupKind, GroupSpec,
    ShellLabel, Tuple,
};
use crate::krawtchouk::{gen_kraw, kraw, GenKrawMethod, GenKrawValue, KrawParams};

/// Number of times the embedding precision is doubled before giving up.
pub const MAX_ESCALATIONS: u32 = 4;

/// `H(n,q,d)`: q-ary n-tuples, adjacent when they differ in exactly d places.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HammingGraphSpec {
    pub n: u32,
    pub q: u32,
    pub d: u32,
}

impl HammingGraphSpec {
    pub fn new(n: u32, q: u32, d: u32) -> Result<Self> {
        if q < 2 || d < 1 || d > n {
            return Err(Error::Domain(format!(
                "H({n},{q},{d}) needs q >= 2 and 1 <= d <= n"
            )));
        }
        Ok(HammingGraphSpec { n, q, d })
    }

    pub fn params(&self) -> KrawParams {
        KrawParams {
            n: self.n,
            q: self.q,
        }
    }

    pub fn degree(&self) -> ExactInt {
        pow_int(self.q as u64 - 1, self.d) * binom(self.n as u64, self.d as i64)
    }
}

/// `H_C(n,G,d)`: edge `x -> y` when `comp(y - x) = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionGraphSpec {
    pub group: GroupSpec,
    pub n: u32,
    pub dcomp: Composition,
}

impl CompositionGraphSpec {
    pub fn new(group: GroupSpec, dcomp: Composition) -> Result<Self> {
        if dcomp.parts() != group.order() as usize {
            return Err(Error::BadLabel(format!(
                "composition {dcomp} has {} parts, {group} has order {}",
                dcomp.parts(),
                group.order()
            )));
        }
        let n = dcomp.n();
        if n == 0 {
            return Err(Error::Domain("composition graph needs n >= 1".into()));
        }
        Ok(CompositionGraphSpec { group, n, dcomp })
    }

    /// The generalized Hadamard graph `Omega_n^(G)`, balanced composition `n/q`.
    pub fn hadamard(group: GroupSpec, n: u32) -> Result<Self> {
        let dcomp = Composition::balanced(group.order(), n)?;
        Self::new(group, dcomp)
    }

    pub fn is_undirected(&self) -> bool {
        self.dcomp.is_negation_closed(&self.group)
    }

    pub fn is_hadamard(&self) -> bool {
        let c = self.dcomp.counts();
        c.iter().all(|&x| x == c[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Hamming(HammingGraphSpec),
    Composition(CompositionGraphSpec),
}

impl GraphSpec {
    pub fn n(&self) -> u32 {
        match self {
            GraphSpec::Hamming(h) => h.n,
            GraphSpec::Composition(c) => c.n,
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            GraphSpec::Hamming(h) => h.q,
            GraphSpec::Composition(c) => c.group.order(),
        }
    }

    /// The group whose translations generate the graph. Hamming graphs use `Z_q`.
    pub fn group(&self) -> GroupSpec {
        match self {
            GraphSpec::Hamming(h) => GroupSpec::cyclic(h.q).expect("q >= 2 checked"),
            GraphSpec::Composition(c) => c.group.clone(),
        }
    }

    /// The shell `S` with `Cay(G^n, S)` equal to this graph.
    pub fn connection_label(&self) -> ShellLabel {
        match self {
            GraphSpec::Hamming(h) => ShellLabel::Weight(h.d),
            GraphSpec::Composition(c) => ShellLabel::Comp(c.dcomp.clone()),
        }
    }

    pub fn is_undirected(&self) -> bool {
        match self {
            GraphSpec::Hamming(_) => true,
            GraphSpec::Composition(c) => c.is_undirected(),
        }
    }

    pub fn vertex_count(&self) -> ExactInt {
        pow_int(self.q() as u64, self.n())
    }

    pub fn degree(&self) -> ExactInt {
        self.connection_label().size(self.q(), self.n())
    }

    /// Eigenvalue on the character `phi_x`.
    pub fn eigenvalue_at(&self, x: &Tuple) -> Result<GenKrawValue> {
        match self {
            GraphSpec::Hamming(h) => Ok(GenKrawValue::integer(kraw(h.params(), h.d, weight(x))?)),
            GraphSpec::Composition(c) => gen_kraw(
                &c.group,
                c.n,
                &c.dcomp,
                &comp(x, c.group.order()),
                GenKrawMethod::Extraction,
            ),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GraphSpec::Hamming(h) => format!("H({},{},{})", h.n, h.q, h.d),
            GraphSpec::Composition(c) if c.is_hadamard() => {
                format!("Omega_{}^({})", c.n, c.group)
            }
            GraphSpec::Composition(c) => format!("H_C({},{},{})", c.n, c.group, c.dcomp),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GraphSpec::Hamming(h) => json!({
                "family": "hamming",
                "n": h.n,
                "q": h.q,
                "d": h.d,
            }),
            GraphSpec::Composition(c) => json!({
                "family": "composition",
                "group": group_json(&c.group),
                "n": c.n,
                "composition": c.dcomp.counts(),
            }),
        }
    }
}

pub fn group_json(g: &GroupSpec) -> Value {
    match g.kind() {
        GroupKind::Cyclic => json!({"kind": "cyclic", "order": g.order()}),
        GroupKind::Field { p, k, modulus } => json!({
            "kind": "field",
            "order": g.order(),
            "p": p,
            "k": k,
            "modulus": modulus,
        }),
    }
}

pub fn shell_json(label: &ShellLabel) -> Value {
    match label {
        ShellLabel::Weight(i) => json!(i),
        ShellLabel::Comp(c) => json!(c.counts()),
    }
}

/// Integer-certified values serialize as decimal strings, others as
/// `{"coeffs": [...], "order": m}`.
pub fn eigenvalue_json(v: &GenKrawValue) -> Value {
    match &v.certified_integer {
        Some(k) => json!(k.to_string()),
        None => json!({
            "coeffs": v.value.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "order": v.value.order(),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumEntry {
    pub shell: ShellLabel,
    pub eigenvalue: GenKrawValue,
    pub multiplicity: ExactInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    /// `None` for spectra assembled by hand.
    pub graph: Option<GraphSpec>,
    pub entries: Vec<SpectrumEntry>,
    pub regular_degree: ExactInt,
    pub vertex_count: ExactInt,
    pub undirected: bool,
}

impl Spectrum {
    /// A spectrum not tied to a graph spec, e.g. for testing the bounds.
    pub fn from_parts(
        entries: Vec<SpectrumEntry>,
        regular_degree: ExactInt,
        vertex_count: ExactInt,
    ) -> Self {
        Spectrum {
            graph: None,
            entries,
            regular_degree,
            vertex_count,
            undirected: true,
        }
    }

    pub fn entry(&self, shell: &ShellLabel) -> Option<&SpectrumEntry> {
        self.entries.iter().find(|e| &e.shell == shell)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "graph": self.graph.as_ref().map(GraphSpec::to_json),
            "entries": self.entries.iter().map(|e| json!({
                "shell": shell_json(&e.shell),
                "eigenvalue": eigenvalue_json(&e.eigenvalue),
                "multiplicity": e.multiplicity.to_string(),
            })).collect::<Vec<_>>(),
            "degree": self.regular_degree.to_string(),
            "vertices": self.vertex_count.to_string(),
        })
    }
}

/// Eigenvalue `K_d(j)` with multiplicity `(q-1)^j C(n,j)` for each weight `j`.
pub fn hamming_spectrum(spec: &HammingGraphSpec) -> Spectrum {
    let params = spec.params();
    let entries = (0..=spec.n)
        .map(|j| SpectrumEntry {
            shell: ShellLabel::Weight(j),
            eigenvalue: GenKrawValue::integer(kraw(params, spec.d, j).expect("j <= n")),
            multiplicity: ShellLabel::Weight(j).size(spec.q, spec.n),
        })
        .collect();
    Spectrum {
        graph: Some(GraphSpec::Hamming(*spec)),
        entries,
        regular_degree: spec.degree(),
        vertex_count: pow_int(spec.q as u64, spec.n),
        undirected: true,
    }
}

/// One entry per composition `j`: eigenvalue `K^{(G)}_d(j)`, multiplicity
/// `multinom(n, j)`.
pub fn composition_spectrum(spec: &CompositionGraphSpec) -> Spectrum {
    composition_spectrum_with(spec, GenKrawMethod::Extraction)
}

pub fn composition_spectrum_with(spec: &CompositionGraphSpec, method: GenKrawMethod) -> Spectrum {
    let q = spec.group.order();
    let labels: Vec<Composition> = enumerate_compositions(q, spec.n).collect();
    let entries = labels
        .into_par_iter()
        .map(|j| {
            let eigenvalue =
                gen_kraw(&spec.group, spec.n, &spec.dcomp, &j, method).expect("validated spec");
            SpectrumEntry {
                multiplicity: j.shell_size(),
                shell: ShellLabel::Comp(j),
                eigenvalue,
            }
        })
        .collect();
    Spectrum {
        graph: Some(GraphSpec::Composition(spec.clone())),
        entries,
        regular_degree: spec.dcomp.shell_size(),
        vertex_count: pow_int(q as u64, spec.n),
        undirected: spec.is_undirected(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinEigenvalue {
    pub value: GenKrawValue,
    pub shell: ShellLabel,
    /// Precision doublings needed to order the eigenvalues (0 when every
    /// comparison was settled exactly or at the base precision).
    pub escalations: u32,
}

fn lift(v: &GenKrawValue, order: u32) -> CycInt {
    match &v.certified_integer {
        Some(k) if v.value.order() != order => CycInt::from_int(order, k.clone()),
        _ => v.value.clone(),
    }
}

/// Orders two real eigenvalues; returns the ordering and the number of
/// precision escalations used.
pub fn compare_real(
    a: &GenKrawValue,
    b: &GenKrawValue,
    a_label: &ShellLabel,
    b_label: &ShellLabel,
) -> Result<(Ordering, u32)> {
    if let (Some(x), Some(y)) = (&a.certified_integer, &b.certified_integer) {
        return Ok((x.cmp(y), 0));
    }
    let order = if a.certified_integer.is_none() {
        a.value.order()
    } else {
        b.value.order()
    };
    let diff = lift(a, order).checked_sub(&lift(b, order))?;
    if diff.is_zero() {
        return Ok((Ordering::Equal, 0));
    }
    for level in 0..=MAX_ESCALATIONS {
        let approx = diff.approx_bits(DEFAULT_BITS << level);
        let margin = 2.0 * approx.precision;
        if approx.re > margin {
            return Ok((Ordering::Greater, level));
        }
        if approx.re < -margin {
            return Ok((Ordering::Less, level));
        }
    }
    Err(Error::PrecisionEscalation {
        left: a_label.to_string(),
        right: b_label.to_string(),
        levels: MAX_ESCALATIONS,
    })
}

/// The smallest eigenvalue and the first shell (in entry order) attaining it.
pub fn min_eigenvalue(s: &Spectrum) -> Result<MinEigenvalue> {
    if !s.undirected {
        return Err(Error::DirectedGraph);
    }
    let mut best: Option<&SpectrumEntry> = None;
    let mut escalations = 0;
    for e in &s.entries {
        if e.eigenvalue.certified_integer.is_none() && !e.eigenvalue.value.is_real() {
            return Err(Error::NonRealEigenvalue {
                shell: e.shell.to_string(),
            });
        }
        match best {
            None => best = Some(e),
            Some(b) => {
                let (ord, esc) = compare_real(&e.eigenvalue, &b.eigenvalue, &e.shell, &b.shell)?;
                escalations = escalations.max(esc);
                if ord == Ordering::Less {
                    best = Some(e);
                }
            }
        }
    }
    let best = best.ok_or_else(|| Error::Domain("empty spectrum".into()))?;
    Ok(MinEigenvalue {
        value: best.eigenvalue.clone(),
        shell: best.shell.clone(),
        escalations,
    })
}

/// `1 - lambda_1 / lambda_min` with `lambda_1` the regular degree.
pub fn hoffman_bound(s: &Spectrum) -> Result<ExactRational> {
    let min = min_eigenvalue(s)?;
    let lambda_min = min
        .value
        .certified_integer
        .ok_or_else(|| Error::IrrationalBound {
            shell: min.shell.to_string(),
        })?;
    if !lambda_min.is_negative() {
        return Err(Error::NoNegativeEigenvalue);
    }
    Ok(BigRational::one() - BigRational::new(s.regular_degree.clone(), lambda_min))
}

/// `sum_shells m * lambda * conj(lambda) == |V| * r`, i.e. `tr(A A*) = |V| r`.
/// For undirected graphs this is `sum m lambda^2 = tr(A^2)`.
pub fn trace_identity_check(s: &Spectrum) -> bool {
    let Some(order) = s.entries.first().map(|e| e.eigenvalue.value.order()) else {
        return s.vertex_count.is_zero() || s.regular_degree.is_zero();
    };
    let order = s
        .entries
        .iter()
        .find(|e| e.eigenvalue.certified_integer.is_none())
        .map_or(order, |e| e.eigenvalue.value.order());
    let mut total = CycInt::zero(order);
    for e in &s.entries {
        let v = lift(&e.eigenvalue, order);
        let Ok(norm) = v.checked_mul(&v.conj()) else {
            return false;
        };
        total = &total + &norm.scale(&e.multiplicity);
    }
    total.as_integer() == Some(&(&s.vertex_count * &s.regular_degree))
}

/// Checks every multiplicity against its shell size, their sum against
/// `|V|`, and the trace identity. Errors name the first offending shell.
pub fn verify_spectrum(s: &Spectrum) -> Result<()> {
    if let Some(graph) = &s.graph {
        let (q, n) = (graph.q(), graph.n());
        for e in &s.entries {
            let want = e.shell.size(q, n);
            if e.multiplicity != want {
                return Err(Error::ConstraintViolated(format!(
                    "shell {}: multiplicity {}, shell size {}",
                    e.shell, e.multiplicity, want
                )));
            }
        }
    }
    let total: BigInt = s.entries.iter().map(|e| &e.multiplicity).sum();
    if total != s.vertex_count {
        return Err(Error::ConstraintViolated(format!(
            "multiplicities sum to {total}, expected {}",
            s.vertex_count
        )));
    }
    if !trace_identity_check(s) {
        return Err(Error::ConstraintViolated(
            "sum of m |lambda|^2 differs from |V| r".into(),
        ));
    }
    Ok(())
}

/// `R(q,n) = (q-1)^3 C(n,3) (q-1)^d C(n,d) / (q^n (q-1)^2 (n-1)^2)` with
/// `d = (q-1)n/q`. `R >= 1` certifies that only the shells of weight 0, 1, 2
/// can carry an eigenvalue of `H(n,q,d)` as negative as `K_d(2)`.
pub fn multiplicity_ratio(q: u32, n: u32) -> Result<ExactRational> {
    if q < 3 || n < 2 {
        return Err(Error::Domain(format!(
            "multiplicity ratio needs q >= 3 and n >= 2 (got q={q}, n={n})"
        )));
    }
    if !((q - 1) * n).is_multiple_of(q) {
        return Err(Error::Divisibility(format!(
            "{q} does not divide ({q}-1)*{n}"
        )));
    }
    let d = (q - 1) * n / q;
    let qm1 = q as u64 - 1;
    let num = pow_int(qm1, 3) * binom(n as u64, 3) * pow_int(qm1, d) * binom(n as u64, d as i64);
    let den = pow_int(q as u64, n) * pow_int(qm1, 2) * BigInt::from((n as u64 - 1).pow(2));
    Ok(BigRational::new(num, den))
}

fn check_tuple(group: &GroupSpec, n: u32, t: &Tuple) -> Result<()> {
    if t.len() != n as usize || t.0.iter().any(|&d| d >= group.order()) {
        return Err(Error::SpecMismatch {
            group: format!("{group}^{n}"),
            detail: format!("tuple {t}"),
        });
    }
    Ok(())
}

/// Applies the adjacency operator to `phi_x` at each sampled vertex `y` and
/// compares with `lambda_x phi_x(y)`, without building the matrix.
pub fn eigenvector_check(spec: &GraphSpec, x: &Tuple, sample: &[Tuple]) -> Result<bool> {
    let group = spec.group();
    let n = spec.n();
    check_tuple(&group, n, x)?;
    for y in sample {
        check_tuple(&group, n, y)?;
    }
    let m = group.root_order();
    let lambda = lift(&spec.eigenvalue_at(x)?, m);
    let shell: Vec<Tuple> = enumerate_shell(&group, n, &spec.connection_label())?.collect();
    for y in sample {
        let mut hist = vec![0i64; m as usize];
        for s in &shell {
            let ys = group.add_tuples(y, s);
            hist[group.tuple_char_exponent(x, &ys) as usize] += 1;
        }
        let lhs = RootSum::from_counts(m, &hist).to_cyc();
        let rhs = &lambda * &CycInt::zeta_pow(m, group.tuple_char_exponent(x, y) as u64);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest `q^n` for which [`projector_identity_check`] builds matrices.
pub const PROJECTOR_MAX_VERTICES: u64 = 81;

/// Builds `E_j[x,y] = K_j(d_H(x,y)) / q^n` for `j = 0..n` and checks that
/// they sum to the identity and are pairwise orthogonal idempotents.
///
/// The matrices are held scaled by `q^n`, so the checks are
/// `sum_j F_j = q^n I` and `F_j F_l = q^n delta_{jl} F_j` over the integers.
pub fn projector_identity_check(n: u32, q: u32) -> Result<bool> {
    let params = KrawParams::new(n, q)?;
    let size = (q as u64).checked_pow(n).unwrap_or(u64::MAX);
    if size > PROJECTOR_MAX_VERTICES {
        return Err(Error::SizeExceeded(format!(
            "projector check needs q^n <= {PROJECTOR_MAX_VERTICES}, got {q}^{n}"
        )));
    }
    let v = size as usize;
    let scale = size as i64;
    let table: Vec<Vec<i64>> = (0..=n)
        .map(|j| {
            (0..=n)
                .map(|i| i64::try_from(kraw(params, j, i).unwrap()).unwrap())
                .collect()
        })
        .collect();
    let tuples: Vec<Tuple> = (0..size)
        .map(|i| Tuple::from_index(i, q, n as usize))
        .collect();
    let mut dist = vec![0usize; v * v];
    for a in 0..v {
        for b in 0..v {
            dist[a * v + b] = tuples[a]
                .0
                .iter()
                .zip(&tuples[b].0)
                .filter(|(x, y)| x != y)
                .count();
        }
    }
    let mats: Vec<Vec<i64>> = table
        .iter()
        .map(|row| dist.iter().map(|&d| row[d]).collect())
        .collect();
    for a in 0..v {
        for b in 0..v {
            let s: i64 = mats.iter().map(|m| m[a * v + b]).sum();
            if s != if a == b { scale } else { 0 } {
                return Ok(false);
            }
        }
    }
    let ok = (0..mats.len()).into_par_iter().all(|j| {
        (0..mats.len()).all(|l| {
            let (fj, fl) = (&mats[j], &mats[l]);
            (0..v).all(|a| {
                (0..v).all(|b| {
                    let prod: i64 = (0..v).map(|c| fj[a * v + c] * fl[c * v + b]).sum();
                    let want = if j == l { scale * fj[a * v + b] } else { 0 };
                    prod == want
                })
            })
        })
    });
    Ok(ok)
}
