//! Upper and lower bounds on the quantum chromatic number.
//!
//! Upper bounds come from modulus-one orthogonal representations: the
//! Hamming-scheme linear program ([`lp_two_support`], [`lp_search`]) turned
//! into character matrices by [`build_representation`], and the
//! n-dimensional character representation of generalized Hadamard graphs
//! ([`hadamard_representation`]). Every representation can be checked
//! exactly with [`verify_representation`]. Lower bounds are Hoffman-type
//! spectral bounds. [`bound_report`] assembles both sides for one graph.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{
    binom, cyclotomic_poly, entropy_q, multinom, pow_int, CycInt, ExactInt, ExactRational,
    RootTable,
};
use crate::groups::{
    enumerate_shell, Composition, GroupElem, GroupKind, GroupSpec, ShellLabel, Tuple,
};
use crate::krawtchouk::{kraw, smallest_root_ratio, KrawParams};
use crate::schemes::{
    composition_spectrum, hamming_spectrum, hoffman_bound, min_eigenvalue, CompositionGraphSpec,
    GraphSpec, HammingGraphSpec,
};

/// Largest vertex count a representation is built for.
pub const MAX_ROWS: u64 = 1 << 20;
/// Largest number of matrix entries a representation is built for.
pub const MAX_ENTRIES: u64 = 1 << 21;
/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x005e_ed0f_c0de;

/// A feasible point of the Hamming-scheme LP: `c_i >= 0`, `sum c_i > 0`,
/// `sum c_i K_i(d) = 0`. Its objective `sum (q-1)^i C(n,i) c_i` is the
/// dimension of the representation it builds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub coefficients: Vec<ExactInt>,
    pub objective: ExactInt,
    pub n: u32,
    pub q: u32,
    pub d: u32,
}

impl LpSolution {
    pub fn new(n: u32, q: u32, d: u32, coefficients: Vec<ExactInt>) -> Result<Self> {
        let mut sol = LpSolution {
            coefficients,
            objective: BigInt::zero(),
            n,
            q,
            d,
        };
        sol.objective = sol.computed_objective()?;
        sol.check()?;
        Ok(sol)
    }

    fn computed_objective(&self) -> Result<ExactInt> {
        if self.coefficients.len() != self.n as usize + 1 {
            return Err(Error::ConstraintViolated(format!(
                "{} coefficients for n = {}",
                self.coefficients.len(),
                self.n
            )));
        }
        Ok(self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| ShellLabel::Weight(i as u32).size(self.q, self.n) * c)
            .sum())
    }

    /// Re-verifies both constraints and the objective from scratch.
    pub fn check(&self) -> Result<()> {
        let params = KrawParams::new(self.n, self.q)?;
        if let Some(i) = self.coefficients.iter().position(|c| c.is_negative()) {
            return Err(Error::ConstraintViolated(format!(
                "c_{i} = {} is negative",
                self.coefficients[i]
            )));
        }
        let objective = self.computed_objective()?;
        if self.coefficients.iter().all(Zero::is_zero) {
            return Err(Error::ConstraintViolated(
                "all coefficients are zero".into(),
            ));
        }
        let mut sum = BigInt::zero();
        for (i, c) in self.coefficients.iter().enumerate() {
            sum += c * kraw(params, i as u32, self.d)?;
        }
        if !sum.is_zero() {
            return Err(Error::ConstraintViolated(format!(
                "sum c_i K_i({}) = {sum} for c = {}",
                self.d,
                list(&self.coefficients)
            )));
        }
        if objective != self.objective {
            return Err(Error::ConstraintViolated(format!(
                "objective {} recorded, {objective} computed",
                self.objective
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coefficients": self.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "objective": self.objective.to_string(),
            "n": self.n,
            "q": self.q,
            "d": self.d,
        })
    }
}

fn list(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn check_lp_params(n: u32, q: u32, d: u32) -> Result<KrawParams> {
    let params = KrawParams::new(n, q)?;
    if d < 1 || d > n {
        return Err(Error::Domain(format!(
            "LP needs 1 <= d <= n, got d={d}, n={n}"
        )));
    }
    Ok(params)
}

/// Best solution of the form `c_0 = -K_i(d)`, `c_i = 1`, over all `i >= 1`
/// with `K_i(d) <= 0`. Ties go to the smallest `i`.
pub fn lp_two_support(n: u32, q: u32, d: u32) -> Result<LpSolution> {
    let params = check_lp_params(n, q, d)?;
    let mut best: Option<(ExactInt, u32, ExactInt)> = None;
    for i in 1..=n {
        let k = kraw(params, i, d)?;
        if k.is_positive() {
            continue;
        }
        let objective = -&k + ShellLabel::Weight(i).size(q, n);
        if best.as_ref().is_none_or(|(o, _, _)| objective < *o) {
            best = Some((objective, i, -k));
        }
    }
    let (_, i, c0) = best.ok_or_else(|| {
        Error::Infeasible(format!("K_i({d}) > 0 for every i >= 1 (n={n}, q={q})"))
    })?;
    let mut c = vec![BigInt::zero(); n as usize + 1];
    c[0] = c0;
    c[i as usize] = BigInt::one();
    LpSolution::new(n, q, d, c)
}

/// Exhaustive search over supports of at most `max_support` indices in
/// `1..=n`, each coefficient in `1..=coeff_bound`, with `c_0` solved from
/// the equality constraint. Never worse than [`lp_two_support`].
pub fn lp_search(
    n: u32,
    q: u32,
    d: u32,
    max_support: usize,
    coeff_bound: u32,
) -> Result<LpSolution> {
    if max_support > 3 {
        return Err(Error::Domain(format!(
            "lp_search supports at most 3 indices, got {max_support}"
        )));
    }
    let params = check_lp_params(n, q, d)?;
    let mut best = lp_two_support(n, q, d)?;
    let k: Vec<ExactInt> = (0..=n).map(|i| kraw(params, i, d)).collect::<Result<_>>()?;
    let size: Vec<ExactInt> = (0..=n).map(|i| ShellLabel::Weight(i).size(q, n)).collect();
    let mut support: Vec<usize> = Vec::new();
    search_supports(1, n as usize, max_support, &mut support, &mut |supp| {
        let mut coeffs = vec![1u32; supp.len()];
        loop {
            // sum over the support must be <= 0 so that c_0 = -sum >= 0
            let kd: ExactInt = supp.iter().zip(&coeffs).map(|(&i, &c)| &k[i] * c).sum();
            if !kd.is_positive() {
                let objective: ExactInt = -&kd
                    + supp
                        .iter()
                        .zip(&coeffs)
                        .map(|(&i, &c)| &size[i] * c)
                        .sum::<ExactInt>();
                if objective < best.objective {
                    let mut c = vec![BigInt::zero(); n as usize + 1];
                    c[0] = -kd;
                    for (&i, &ci) in supp.iter().zip(&coeffs) {
                        c[i] = BigInt::from(ci);
                    }
                    best = LpSolution {
                        coefficients: c,
                        objective,
                        n,
                        q,
                        d,
                    };
                }
            }
            let Some(pos) = coeffs.iter().rposition(|&c| c < coeff_bound) else {
                break;
            };
            coeffs[pos] += 1;
            for c in &mut coeffs[pos + 1..] {
                *c = 1;
            }
        }
    });
    best.check()?;
    Ok(best)
}

fn search_supports(
    start: usize,
    n: usize,
    left: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if !current.is_empty() {
        visit(current);
    }
    if left == 0 {
        return;
    }
    for i in start..=n {
        current.push(i);
        search_supports(i + 1, n, left - 1, current, visit);
        current.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepProvenance {
    Lp(LpSolution),
    HadamardCharacter,
}

impl RepProvenance {
    pub fn tag(&self) -> &'static str {
        match self {
            RepProvenance::Lp(_) => "lp",
            RepProvenance::HadamardCharacter => "hadamard-character",
        }
    }
}

/// A `q^n x k` matrix of roots of unity, one row per vertex in canonical
/// tuple order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub group: GroupSpec,
    pub n: u32,
    pub rows: u64,
    pub columns: usize,
    /// Entries live in `Z[zeta_order]`.
    pub order: u32,
    /// Row-major.
    pub entries: Vec<CycInt>,
    pub provenance: RepProvenance,
}

impl Representation {
    pub fn entry(&self, row: u64, col: usize) -> &CycInt {
        &self.entries[row as usize * self.columns + col]
    }

    pub fn entry_mut(&mut self, row: u64, col: usize) -> &mut CycInt {
        &mut self.entries[row as usize * self.columns + col]
    }

    pub fn row_label(&self, row: u64) -> Tuple {
        Tuple::from_index(row, self.group.order(), self.n as usize)
    }

    /// CSV with header `vertex(z=zeta_m),c0,...`; the vertex cell lists
    /// the tuple digits separated by spaces.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut header = vec![format!("vertex(z=zeta_{})", self.order)];
        header.extend((0..self.columns).map(|c| format!("c{c}")));
        let csv_err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(&header).map_err(csv_err)?;
        for row in 0..self.rows {
            let label = self.row_label(row);
            let digits: Vec<String> = label.0.iter().map(|d| d.to_string()).collect();
            let mut record = vec![digits.join(" ")];
            record.extend((0..self.columns).map(|c| self.entry(row, c).to_poly_string()));
            w.write_record(&record).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn check_size(q: u32, n: u32, columns: u64) -> Result<u64> {
    let rows = (q as u64)
        .checked_pow(n)
        .filter(|&r| r <= MAX_ROWS)
        .ok_or_else(|| Error::SizeExceeded(format!("{q}^{n} rows exceeds {MAX_ROWS}")))?;
    if rows.saturating_mul(columns) > MAX_ENTRIES {
        return Err(Error::SizeExceeded(format!(
            "{rows} x {columns} entries exceeds {MAX_ENTRIES}"
        )));
    }
    Ok(rows)
}

/// Concatenates `c_i` copies of the character block `Phi_i` (columns
/// `phi_y`, `y` of weight `i`) for each `i`.
pub fn build_representation(solution: &LpSolution, group: &GroupSpec) -> Result<Representation> {
    solution.check()?;
    let q = group.order();
    if q != solution.q {
        return Err(Error::SpecMismatch {
            group: group.to_string(),
            detail: format!("LP solution has q = {}", solution.q),
        });
    }
    let n = solution.n;
    let columns = solution
        .objective
        .to_u64()
        .ok_or_else(|| Error::SizeExceeded(format!("{} columns", solution.objective)))?;
    let rows = check_size(q, n, columns)?;
    let mut chars: Vec<Tuple> = Vec::with_capacity(columns as usize);
    for (i, c) in solution.coefficients.iter().enumerate() {
        let copies = c.to_usize().unwrap_or(0);
        if copies == 0 {
            continue;
        }
        let shell: Vec<Tuple> = enumerate_shell(group, n, &ShellLabel::Weight(i as u32))?.collect();
        for _ in 0..copies {
            chars.extend(shell.iter().cloned());
        }
    }
    let m = group.root_order();
    let powers: Vec<CycInt> = (0..m).map(|e| CycInt::zeta_pow(m, e as u64)).collect();
    let entries: Vec<CycInt> = (0..rows)
        .into_par_iter()
        .flat_map_iter(|row| {
            let x = Tuple::from_index(row, q, n as usize);
            chars
                .iter()
                .map(|y| powers[group.tuple_char_exponent(y, &x) as usize].clone())
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(Representation {
        group: group.clone(),
        n,
        rows,
        columns: chars.len(),
        order: m,
        entries,
        provenance: RepProvenance::Lp(solution.clone()),
    })
}

/// `rho(x) = (phi(x_1), ..., phi(x_n))` for the nontrivial character
/// `phi = phi_1`.
pub fn hadamard_representation(group: &GroupSpec, n: u32) -> Result<Representation> {
    let q = group.order();
    Composition::balanced(q, n)?;
    let rows = check_size(q, n, n as u64)?;
    let m = group.root_order();
    let symbol: Vec<CycInt> = (0..q)
        .map(|g| CycInt::zeta_pow(m, group.char_exponent(group.one(), GroupElem(g)) as u64))
        .collect();
    let entries: Vec<CycInt> = (0..rows)
        .flat_map(|row| {
            Tuple::from_index(row, q, n as usize)
                .0
                .into_iter()
                .map(|g| symbol[g as usize].clone())
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(Representation {
        group: group.clone(),
        n,
        rows,
        columns: n as usize,
        order: m,
        entries,
        provenance: RepProvenance::HadamardCharacter,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Full,
    /// `count` vertices drawn with a SplitMix64 stream from `seed`; every
    /// out-neighbour of each drawn vertex is checked.
    Sampled {
        count: u64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifySummary {
    pub mode: VerifyMode,
    pub rows: u64,
    pub columns: usize,
    pub vertices_checked: u64,
    pub pairs_checked: u64,
}

impl VerifySummary {
    pub fn to_json(&self) -> Value {
        let (mode, seed, count) = match self.mode {
            VerifyMode::Full => ("full", None, None),
            VerifyMode::Sampled { count, seed } => ("sampled", Some(seed), Some(count)),
        };
        json!({
            "mode": mode,
            "seed": seed,
            "sample_count": count,
            "rows": self.rows,
            "columns": self.columns,
            "vertices_checked": self.vertices_checked,
            "pairs_checked": self.pairs_checked,
        })
    }
}

/// Exact zero test for sums `sum_e c_e zeta_M^e` given as exponent counts.
///
/// When `M = 2m` with `m` odd, `zeta_M^e` is `zeta_m^{e/2}` for even `e` and
/// `-zeta_m^{(e+m)/2}` for odd `e`, so sums fold into `Z[zeta_m]`. For prime
/// `m` the only relation is `1 + zeta + ... + zeta^{m-1} = 0`; otherwise the
/// folded polynomial is reduced modulo `Phi_m`.
struct ZeroTest {
    /// `(slot, sign)` for each exponent in `0..2M`.
    fold: Vec<(usize, i64)>,
    m: usize,
    prime: bool,
    phi: std::sync::Arc<Vec<i64>>,
}

impl ZeroTest {
    fn new(big: u32) -> Self {
        let m = if big % 4 == 2 { big / 2 } else { big };
        let fold = (0..2 * big)
            .map(|e| e % big)
            .map(|e| match (m == big, e % 2) {
                (true, _) => (e as usize, 1),
                (false, 0) => ((e / 2) as usize, 1),
                (false, _) => ((((e + m) / 2) % m) as usize, -1),
            })
            .collect();
        ZeroTest {
            fold,
            m: m as usize,
            prime: matches!(crate::groups::prime_power(m), Some((_, 1))),
            phi: cyclotomic_poly(m),
        }
    }

    /// Adds `zeta_M^e` for `e < 2M`.
    fn add(&self, acc: &mut [i64], e: u32) {
        let (slot, sign) = self.fold[e as usize];
        acc[slot] += sign;
    }

    /// Consumes `acc` (length `m`).
    fn is_zero(&self, acc: &mut [i64]) -> bool {
        if self.prime {
            return acc.iter().all(|&c| c == acc[0]);
        }
        let deg = self.phi.len() - 1;
        for top in (deg..acc.len()).rev() {
            let c = acc[top];
            if c != 0 {
                for (j, &p) in self.phi.iter().enumerate() {
                    acc[top - deg + j] -= c * p;
                }
            }
        }
        acc[..deg].iter().all(|&c| c == 0)
    }
}

/// Checks that every entry is a root of unity and that the rows of each
/// adjacent pair `(x, x + s)`, `s` in the generating shell, are orthogonal
/// under the Hermitian inner product. Errors name the first witness in
/// canonical vertex order.
pub fn verify_representation(
    rep: &Representation,
    spec: &GraphSpec,
    mode: VerifyMode,
) -> Result<VerifySummary> {
    let q = rep.group.order();
    let n = rep.n;
    let mismatch = |detail: String| Error::SpecMismatch {
        group: rep.group.to_string(),
        detail,
    };
    if spec.q() != q || spec.n() != n {
        return Err(mismatch(format!(
            "representation over {}^{n} for {}",
            rep.group,
            spec.name()
        )));
    }
    if let GraphSpec::Composition(c) = spec {
        if c.group != rep.group {
            return Err(mismatch(format!("graph is over {}", c.group)));
        }
    }
    let rows = pow_int(q as u64, n).to_u64().unwrap_or(u64::MAX);
    if rep.rows != rows || rep.entries.len() as u64 != rows * rep.columns as u64 {
        return Err(mismatch(format!(
            "{} rows x {} columns with {} entries",
            rep.rows,
            rep.columns,
            rep.entries.len()
        )));
    }

    let table = RootTable::new(rep.order);
    let big = table.big_order();
    let exps: Vec<Option<u32>> = rep.entries.par_iter().map(|e| table.exponent(e)).collect();
    if let Some(pos) = exps.iter().position(Option::is_none) {
        let (row, col) = (pos / rep.columns, pos % rep.columns);
        return Err(Error::NotUnitModulus {
            row: rep.row_label(row as u64).to_string(),
            col,
            value: rep.entries[pos].to_poly_string(),
        });
    }
    let exps: Vec<u32> = exps.into_iter().map(Option::unwrap).collect();

    let shell: Vec<Tuple> = enumerate_shell(&rep.group, n, &spec.connection_label())?.collect();
    let vertices: Vec<u64> = match mode {
        VerifyMode::Full => (0..rows).collect(),
        VerifyMode::Sampled { count, seed } => {
            let mut rng = SplitMix64::seed_from_u64(seed);
            let mut v: Vec<u64> = (0..count).map(|_| rng.next_u64() % rows).collect();
            v.sort_unstable();
            v.dedup();
            v
        }
    };
    let zero = ZeroTest::new(big);
    let cols = rep.columns;
    let group = &rep.group;
    // orthogonality is symmetric, so full checks of undirected graphs visit
    // each edge once, from its lower endpoint
    let one_way = mode == VerifyMode::Full && spec.is_undirected();
    let witness = vertices.par_iter().find_map_first(|&xi| {
        let x = Tuple::from_index(xi, q, n as usize);
        let ex = &exps[xi as usize * cols..(xi as usize + 1) * cols];
        let mut acc = vec![0i64; zero.m];
        for s in &shell {
            let yi = x.0.iter().zip(&s.0).fold(0u64, |acc, (&a, &b)| {
                acc * q as u64 + group.add(GroupElem(a), GroupElem(b)).0 as u64
            });
            if one_way && yi < xi {
                continue;
            }
            let ey = &exps[yi as usize * cols..(yi as usize + 1) * cols];
            acc.iter_mut().for_each(|h| *h = 0);
            for (a, b) in ex.iter().zip(ey) {
                zero.add(&mut acc, b + big - a);
            }
            if !zero.is_zero(&mut acc) {
                return Some((xi, yi));
            }
        }
        None
    });
    if let Some((xi, yi)) = witness {
        let mut inner = CycInt::zero(rep.order);
        for c in 0..cols {
            inner = &inner + &(&rep.entry(xi, c).conj() * rep.entry(yi, c));
        }
        return Err(Error::NotOrthogonal {
            x: rep.row_label(xi).to_string(),
            y: rep.row_label(yi).to_string(),
            inner: inner.to_poly_string(),
        });
    }
    Ok(VerifySummary {
        mode,
        rows,
        columns: cols,
        vertices_checked: vertices.len() as u64,
        pairs_checked: if one_way {
            let loops = shell.iter().any(|s| s.0.iter().all(|&g| g == 0)) as u64;
            (rows * shell.len() as u64 + loops * rows) / 2
        } else {
            vertices.len() as u64 * shell.len() as u64
        },
    })
}

/// Full verification when at most this many entry products are needed,
/// sampled above it.
pub const FULL_VERIFY_BUDGET: u64 = 400_000_000;
/// Vertices drawn for sampled verification inside [`bound_report`].
pub const REPORT_SAMPLE: u64 = 4096;

fn auto_mode(rep: &Representation, spec: &GraphSpec) -> VerifyMode {
    let work = spec
        .degree()
        .to_u64()
        .unwrap_or(u64::MAX)
        .saturating_mul(rep.rows)
        .saturating_mul(rep.columns as u64);
    if work <= FULL_VERIFY_BUDGET {
        VerifyMode::Full
    } else {
        VerifyMode::Sampled {
            count: REPORT_SAMPLE,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: ExactRational,
    pub provenance: String,
}

impl Bound {
    fn new(value: impl Into<ExactRational>, provenance: &str) -> Self {
        Bound {
            value: value.into(),
            provenance: provenance.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub graph: GraphSpec,
    pub upper: Vec<Bound>,
    pub lower: Vec<Bound>,
    pub exact: Option<ExactInt>,
    pub lp: Option<LpSolution>,
    pub representation: Option<VerifySummary>,
    pub conjecture: Option<Verdict>,
    /// `h_q` of the limiting normalized smallest Krawtchouk root, for
    /// Hamming graphs with `0 < d/n < (q-1)/q`.
    pub mrrw_exponent: Option<f64>,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn best_upper(&self) -> Option<&ExactRational> {
        self.upper.iter().map(|b| &b.value).min()
    }

    pub fn best_lower(&self) -> Option<&ExactRational> {
        self.lower.iter().map(|b| &b.value).max()
    }

    /// Every lower bound is at most every upper bound.
    pub fn is_consistent(&self) -> bool {
        match (self.best_lower(), self.best_upper()) {
            (Some(l), Some(u)) => l <= u,
            _ => true,
        }
    }

    pub fn to_json(&self) -> Value {
        let bounds = |v: &[Bound]| {
            v.iter()
                .map(|b| json!({"value": b.value.to_string(), "provenance": b.provenance}))
                .collect::<Vec<_>>()
        };
        json!({
            "graph": self.graph.to_json(),
            "upper": bounds(&self.upper),
            "lower": bounds(&self.lower),
            "exact": self.exact.as_ref().map(|e| e.to_string()),
            "lp": self.lp.as_ref().map(LpSolution::to_json),
            "representation": self.representation.as_ref().map(VerifySummary::to_json),
            "conjecture": self.conjecture.as_ref().map(Verdict::to_json),
            "mrrw_exponent": self.mrrw_exponent,
            "notes": self.notes,
        })
    }
}

fn ceil_int(r: &ExactRational) -> ExactInt {
    r.ceil().to_integer()
}

/// Collects every applicable bound for `spec`, verifies the representation
/// behind each representation-based upper bound, and records the exact
/// value when the best bounds meet. Failures of individual bounds become
/// notes.
pub fn bound_report(spec: &GraphSpec) -> BoundReport {
    let mut report = BoundReport {
        graph: spec.clone(),
        upper: Vec::new(),
        lower: Vec::new(),
        exact: None,
        lp: None,
        representation: None,
        conjecture: None,
        mrrw_exponent: None,
        notes: Vec::new(),
    };
    match spec {
        GraphSpec::Hamming(h) => hamming_bounds(h, &mut report),
        GraphSpec::Composition(c) => composition_bounds(c, &mut report),
    }
    if let (Some(l), Some(u)) = (report.best_lower(), report.best_upper()) {
        let lo = ceil_int(l);
        if u.is_integer() && lo == u.to_integer() {
            let gated = matches!(
                (spec, &report.conjecture),
                (GraphSpec::Composition(c), v) if c.is_hadamard()
                    && matches!(c.group.kind(), GroupKind::Cyclic)
                    && !matches!(v, Some(Verdict::Holds { .. }))
            );
            if gated {
                report.notes.push(
                    "bounds meet but the minimum-eigenvalue conjecture is not confirmed here"
                        .into(),
                );
            } else {
                report.exact = Some(lo);
            }
        }
    }
    report
}

fn hamming_bounds(h: &HammingGraphSpec, report: &mut BoundReport) {
    let (n, q, d) = (h.n, h.q, h.d);
    let t = (q - 1) * n;
    let qd = q * d;
    if qd >= t {
        report
            .upper
            .push(Bound::new(BigInt::from(qd), "plotkin-regime qd"));
    } else if (t - qd) * (t - qd) < t {
        let two = BigInt::from(2) * pow_int(q as u64 - 1, 2) * binom(n as u64, 2);
        report.upper.push(Bound::new(two, "window 2(q-1)^2 C(n,2)"));
    }
    if qd < t {
        let delta = d as f64 / n as f64;
        let x = smallest_root_ratio(q, delta).clamp(0.0, (q - 1) as f64 / q as f64);
        report.mrrw_exponent = entropy_q(q, x).ok();
    }
    match lp_two_support(n, q, d) {
        Ok(sol) => {
            report
                .upper
                .push(Bound::new(sol.objective.clone(), "lp-two-support"));
            let group = GroupSpec::cyclic(q).expect("q >= 2");
            match build_representation(&sol, &group) {
                Ok(rep) => {
                    let spec = GraphSpec::Hamming(*h);
                    match verify_representation(&rep, &spec, auto_mode(&rep, &spec)) {
                        Ok(summary) => report.representation = Some(summary),
                        Err(e) => report
                            .notes
                            .push(format!("representation check failed: {e}")),
                    }
                }
                Err(e) => report.notes.push(format!("representation not built: {e}")),
            }
            report.lp = Some(sol);
        }
        Err(e) => report.notes.push(format!("lp: {e}")),
    }
    if q >= 3 {
        if qd == t {
            report.lower.push(Bound::new(
                BigInt::from((q - 1) * (n - 1) + 1),
                "plotkin-lower (q-1)(n-1)+1",
            ));
        } else if qd > t {
            report.lower.push(Bound::new(
                BigRational::new(qd.into(), (qd - t).into()),
                "plotkin-lower qd/(qd-(q-1)n)",
            ));
        }
    }
    match hoffman_bound(&hamming_spectrum(h)) {
        Ok(b) => report.lower.push(Bound::new(b, "hoffman")),
        Err(e) => report.notes.push(format!("hoffman: {e}")),
    }
}

fn composition_bounds(c: &CompositionGraphSpec, report: &mut BoundReport) {
    let spec = GraphSpec::Composition(c.clone());
    if c.is_hadamard() {
        match hadamard_representation(&c.group, c.n) {
            Ok(rep) => match verify_representation(&rep, &spec, auto_mode(&rep, &spec)) {
                Ok(summary) => {
                    report
                        .upper
                        .push(Bound::new(BigInt::from(c.n), "hadamard-representation"));
                    report.representation = Some(summary);
                }
                Err(e) => report
                    .notes
                    .push(format!("representation check failed: {e}")),
            },
            Err(e) => report.notes.push(format!("representation not built: {e}")),
        }
        if matches!(c.group.kind(), GroupKind::Cyclic) {
            match conjecture_probe(c.group.order(), c.n) {
                Ok(v) => report.conjecture = Some(v),
                Err(e) => report.notes.push(format!("conjecture probe: {e}")),
            }
        }
    }
    match hoffman_bound(&composition_spectrum(c)) {
        Ok(b) => report.lower.push(Bound::new(b, "hoffman")),
        Err(e) => report.notes.push(format!("hoffman: {e}")),
    }
}

/// Outcome of testing, for one `(q, n)`, that the minimum eigenvalue of
/// `Omega_n^(Z_q)` equals `-multinom(n; n/q, ..., n/q) / (n-1)` and is
/// attained at the composition `(n-2, 1, 0, ..., 0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NotApplicable {
        reason: String,
    },
    Holds {
        witness: Composition,
        min: ExactInt,
    },
    Fails {
        counterexample: Composition,
        value: String,
        predicted: ExactInt,
    },
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        match self {
            Verdict::NotApplicable { reason } => {
                json!({"verdict": "not-applicable", "reason": reason})
            }
            Verdict::Holds { witness, min } => json!({
                "verdict": "holds",
                "witness": witness.counts(),
                "min": min.to_string(),
            }),
            Verdict::Fails {
                counterexample,
                value,
                predicted,
            } => json!({
                "verdict": "fails",
                "counterexample": counterexample.counts(),
                "value": value,
                "predicted": predicted.to_string(),
            }),
        }
    }
}

/// The composition `(n-2, 1, 0, ..., 0, 1)`; for `q = 2` it is `(n-2, 2)`.
pub fn conjecture_target(q: u32, n: u32) -> Result<Composition> {
    if q < 2 || n < 2 {
        return Err(Error::Domain(format!(
            "target needs q, n >= 2 (q={q}, n={n})"
        )));
    }
    let mut v = vec![0u32; q as usize];
    v[0] = n - 2;
    v[1] += 1;
    v[q as usize - 1] += 1;
    Ok(Composition::new(v))
}

/// `-multinom(n; n/q, ..., n/q) / (n-1)`, when it is an integer.
pub fn conjecture_value(q: u32, n: u32) -> Result<ExactInt> {
    let bal = Composition::balanced(q, n)?;
    let m = multinom(n as u64, bal.counts())?;
    let (quot, rem) = m.div_rem(&BigInt::from(n - 1));
    if !rem.is_zero() {
        return Err(Error::Divisibility(format!("{m} / {}", n - 1)));
    }
    Ok(-quot)
}

pub fn conjecture_probe(q: u32, n: u32) -> Result<Verdict> {
    Composition::balanced(q, n)?;
    if ((q - 1) * n / q) % 2 == 1 {
        return Ok(Verdict::NotApplicable {
            reason: "(q-1)n/q odd".into(),
        });
    }
    let spec = CompositionGraphSpec::hadamard(GroupSpec::cyclic(q)?, n)?;
    let spectrum = composition_spectrum(&spec);
    let min = min_eigenvalue(&spectrum)?;
    let target = conjecture_target(q, n)?;
    let predicted = conjecture_value(q, n)?;
    let at_target = spectrum
        .entry(&ShellLabel::Comp(target.clone()))
        .and_then(|e| e.eigenvalue.certified_integer.clone());
    let min_int = min.value.certified_integer.clone();
    if at_target.as_ref() != Some(&predicted) {
        return Ok(Verdict::Fails {
            counterexample: target,
            value: at_target.map_or_else(|| "non-integer".into(), |v| v.to_string()),
            predicted,
        });
    }
    if min_int.as_ref() != Some(&predicted) {
        let ShellLabel::Comp(shell) = min.shell else {
            unreachable!("composition spectra use composition labels")
        };
        return Ok(Verdict::Fails {
            counterexample: shell,
            value: min.value.value.to_poly_string(),
            predicted,
        });
    }
    Ok(Verdict::Holds {
        witness: target,
        min: predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn hamming(n: u32, q: u32, d: u32) -> GraphSpec {
        GraphSpec::Hamming(HammingGraphSpec::new(n, q, d).unwrap())
    }

    fn omega(g: GroupSpec, n: u32) -> GraphSpec {
        GraphSpec::Composition(CompositionGraphSpec::hadamard(g, n).unwrap())
    }

    #[test]
    fn two_support_examples() {
        let s = lp_two_support(4, 2, 2).unwrap();
        assert_eq!(s.coefficients, ints(&[0, 1, 0, 0, 0]));
        assert_eq!(s.objective, BigInt::from(4));
        let s = lp_two_support(3, 3, 2).unwrap();
        assert_eq!(s.coefficients, ints(&[0, 1, 0, 0]));
        assert_eq!(s.objective, BigInt::from(6));
        let s = lp_two_support(5, 2, 2).unwrap();
        assert_eq!(s.coefficients, ints(&[2, 0, 1, 0, 0, 0]));
        assert_eq!(s.objective, BigInt::from(12));
        let s = lp_two_support(6, 2, 4).unwrap();
        assert_eq!(s.objective, BigInt::from(8));
        let s = lp_two_support(3, 3, 3).unwrap();
        assert_eq!(s.coefficients, ints(&[3, 1, 0, 0]));
        assert!(lp_two_support(3, 3, 0).is_err());
    }

    #[test]
    fn check_catches_corruption() {
        let mut s = lp_two_support(5, 2, 2).unwrap();
        s.coefficients[0] += 1;
        let Err(Error::ConstraintViolated(msg)) = s.check() else {
            panic!()
        };
        assert!(msg.contains("sum c_i K_i(2) = 1"), "{msg}");
        let zero = LpSolution::new(3, 2, 1, vec![BigInt::zero(); 4]);
        assert!(matches!(zero, Err(Error::ConstraintViolated(_))));
    }

    #[test]
    fn search_never_worse_than_two_support() {
        for q in 2..=3u32 {
            for n in 1..=7u32 {
                for d in 1..=n {
                    let two = lp_two_support(n, q, d).unwrap();
                    let found = lp_search(n, q, d, 2, 5).unwrap();
                    assert!(found.objective <= two.objective);
                    found.check().unwrap();
                }
            }
        }
        assert!(lp_search(6, 2, 4, 2, 5).unwrap().objective <= BigInt::from(8));
        assert!(lp_search(4, 2, 2, 4, 5).is_err());
    }

    #[test]
    fn search_finds_multi_support_improvements() {
        // brute force over all c in [0,3]^(n+1) for tiny cases
        for (n, q, d) in [(4u32, 2u32, 1u32), (4, 3, 2), (5, 2, 3)] {
            let params = KrawParams::new(n, q).unwrap();
            let k: Vec<i64> = (0..=n)
                .map(|i| i64::try_from(kraw(params, i, d).unwrap()).unwrap())
                .collect();
            let w: Vec<i64> = (0..=n)
                .map(|i| i64::try_from(ShellLabel::Weight(i).size(q, n)).unwrap())
                .collect();
            let mut best = i64::MAX;
            let len = n as usize + 1;
            for code in 1..4i64.pow(len as u32) {
                let c: Vec<i64> = (0..len).map(|i| code / 4i64.pow(i as u32) % 4).collect();
                if c[1..].iter().filter(|&&x| x > 0).count() > 3 {
                    continue;
                }
                if c.iter().zip(&k).map(|(a, b)| a * b).sum::<i64>() == 0 {
                    best = best.min(c.iter().zip(&w).map(|(a, b)| a * b).sum());
                }
            }
            let found = lp_search(n, q, d, 3, 3).unwrap();
            assert!(found.objective <= BigInt::from(best), "({n},{q},{d})");
        }
    }

    #[test]
    fn lp_representations_verify() {
        let sol = lp_two_support(4, 2, 2).unwrap();
        let rep = build_representation(&sol, &GroupSpec::cyclic(2).unwrap()).unwrap();
        assert_eq!((rep.rows, rep.columns), (16, 4));
        let sum = verify_representation(&rep, &hamming(4, 2, 2), VerifyMode::Full).unwrap();
        // 16 * 6 / 2 edges
        assert_eq!(sum.pairs_checked, 48);
        let sol = lp_two_support(3, 3, 2).unwrap();
        let rep = build_representation(&sol, &GroupSpec::cyclic(3).unwrap()).unwrap();
        assert_eq!((rep.rows, rep.columns), (27, 6));
        verify_representation(&rep, &hamming(3, 3, 2), VerifyMode::Full).unwrap();
        // c_0 = 1 appends an all-ones column
        let sol = lp_two_support(3, 3, 3).unwrap();
        let rep = build_representation(&sol, &GroupSpec::cyclic(3).unwrap()).unwrap();
        assert_eq!(rep.columns, 9);
        assert!((0..27).all(|r| rep.entry(r, 0) == &CycInt::one(3)));
        verify_representation(&rep, &hamming(3, 3, 3), VerifyMode::Full).unwrap();
    }

    #[test]
    fn lp_representation_over_field_group() {
        let sol = lp_two_support(3, 4, 3).unwrap();
        let rep = build_representation(&sol, &GroupSpec::field_of_order(4).unwrap()).unwrap();
        verify_representation(&rep, &hamming(3, 4, 3), VerifyMode::Full).unwrap();
    }

    #[test]
    fn hadamard_representations_verify() {
        let rep = hadamard_representation(&GroupSpec::cyclic(2).unwrap(), 4).unwrap();
        assert!(rep
            .entries
            .iter()
            .all(|e| e == &CycInt::one(2) || e == &-CycInt::one(2)));
        verify_representation(
            &rep,
            &omega(GroupSpec::cyclic(2).unwrap(), 4),
            VerifyMode::Full,
        )
        .unwrap();
        let f3 = GroupSpec::field_of_order(3).unwrap();
        let rep = hadamard_representation(&f3, 3).unwrap();
        assert_eq!((rep.rows, rep.columns), (27, 3));
        verify_representation(&rep, &omega(f3, 3), VerifyMode::Full).unwrap();
        let z2 = GroupSpec::cyclic(2).unwrap();
        let rep = hadamard_representation(&z2, 2).unwrap();
        verify_representation(&rep, &omega(z2, 2), VerifyMode::Full).unwrap();
        let f4 = GroupSpec::field_of_order(4).unwrap();
        let rep = hadamard_representation(&f4, 4).unwrap();
        assert_eq!(rep.order, 2);
        verify_representation(&rep, &omega(f4, 4), VerifyMode::Full).unwrap();
        assert!(matches!(
            hadamard_representation(&GroupSpec::cyclic(3).unwrap(), 4),
            Err(Error::Divisibility(_))
        ));
    }

    #[test]
    fn mutations_name_witnesses() {
        let sol = lp_two_support(4, 2, 2).unwrap();
        let z2 = GroupSpec::cyclic(2).unwrap();
        let mut rep = build_representation(&sol, &z2).unwrap();
        *rep.entry_mut(5, 2) = -rep.entry(5, 2).clone();
        let err = verify_representation(&rep, &hamming(4, 2, 2), VerifyMode::Full).unwrap_err();
        // row 5 = (0,1,0,1) is adjacent to row 0, the first vertex checked
        assert_eq!(
            err,
            Error::NotOrthogonal {
                x: "(0,0,0,0)".into(),
                y: "(0,1,0,1)".into(),
                inner: "2".into(),
            }
        );
        let mut rep = build_representation(&sol, &z2).unwrap();
        *rep.entry_mut(3, 1) = CycInt::from_int(2, 2);
        let err = verify_representation(&rep, &hamming(4, 2, 2), VerifyMode::Full).unwrap_err();
        assert_eq!(
            err,
            Error::NotUnitModulus {
                row: "(0,0,1,1)".into(),
                col: 1,
                value: "2".into(),
            }
        );
    }

    #[test]
    fn wrong_graph_is_rejected() {
        let rep = hadamard_representation(&GroupSpec::cyclic(3).unwrap(), 3).unwrap();
        // 3-dim rows cannot be orthogonal for all pairs at distance 1
        assert!(matches!(
            verify_representation(&rep, &hamming(3, 3, 1), VerifyMode::Full),
            Err(Error::NotOrthogonal { .. })
        ));
        let f3 = GroupSpec::field_of_order(3).unwrap();
        assert!(matches!(
            verify_representation(&rep, &omega(f3, 3), VerifyMode::Full),
            Err(Error::SpecMismatch { .. })
        ));
    }

    #[test]
    fn sampled_mode_is_reproducible() {
        let g = GroupSpec::cyclic(3).unwrap();
        let rep = hadamard_representation(&g, 6).unwrap();
        let spec = omega(g, 6);
        let mode = VerifyMode::Sampled { count: 50, seed: 7 };
        let a = verify_representation(&rep, &spec, mode).unwrap();
        let b = verify_representation(&rep, &spec, mode).unwrap();
        assert_eq!(a, b);
        assert!(a.vertices_checked <= 50);
    }

    #[test]
    fn zero_test_matches_cyclotomic_arithmetic() {
        for big in [2u32, 4, 6, 8, 10, 12, 14, 18, 20] {
            let z = ZeroTest::new(big);
            // every count vector with entries in {-1, 0, 1} and small support
            for code in 0..3u32.pow(big.min(8)) {
                let mut counts = vec![0i64; big as usize];
                let mut acc = vec![0i64; z.m];
                let mut c = code;
                for e in 0..big.min(8) {
                    let v = (c % 3) as i64 - 1;
                    c /= 3;
                    counts[e as usize] = v;
                    for _ in 0..v.max(0) {
                        z.add(&mut acc, e);
                    }
                    for _ in 0..(-v).max(0) {
                        z.add(&mut acc, (e + big / 2) % big);
                    }
                }
                let exact = scheme_sum(big, &counts);
                assert_eq!(z.is_zero(&mut acc), exact, "M={big} counts={counts:?}");
            }
        }
    }

    fn scheme_sum(big: u32, counts: &[i64]) -> bool {
        crate::exactnum::RootSum::from_counts(big, counts)
            .to_cyc()
            .is_zero()
    }

    #[test]
    fn report_examples() {
        let r = bound_report(&hamming(3, 3, 3));
        assert_eq!(
            r.best_lower().unwrap(),
            &BigRational::from_integer(3.into())
        );
        assert_eq!(
            r.best_upper().unwrap(),
            &BigRational::from_integer(9.into())
        );
        assert_eq!(r.exact, None);
        assert!(r.is_consistent());
        let r = bound_report(&omega(GroupSpec::field_of_order(3).unwrap(), 3));
        assert_eq!(r.exact, Some(BigInt::from(3)));
        let r = bound_report(&omega(GroupSpec::cyclic(2).unwrap(), 4));
        assert_eq!(r.exact, Some(BigInt::from(4)));
        assert!(matches!(r.conjecture, Some(Verdict::Holds { .. })));
    }

    #[test]
    fn report_window_and_mrrw() {
        // (q-1)n/q = 5, sqrt(5)/2 ~ 1.118: d = 4 is in the window
        let r = bound_report(&hamming(10, 2, 4));
        assert!(r.upper.iter().any(|b| b.provenance.starts_with("window")));
        assert!(r.mrrw_exponent.unwrap() > 0.0 && r.mrrw_exponent.unwrap() < 1.0);
        let r = bound_report(&hamming(10, 2, 5));
        assert!(r.mrrw_exponent.is_none());
        assert!(r.upper.iter().any(|b| b.provenance.starts_with("plotkin")));
    }

    #[test]
    fn report_exact_at_plotkin_edge() {
        // d = ((q-1)n+1)/q gives exact (q-1)n+1
        let r = bound_report(&hamming(5, 3, 4));
        assert_eq!(r.exact, None); // 3*4 = 12 != 11
        let r = bound_report(&hamming(4, 3, 3));
        assert_eq!(r.exact, Some(BigInt::from(9)));
    }

    #[test]
    fn conjecture_examples() {
        assert_eq!(
            conjecture_probe(2, 8).unwrap(),
            Verdict::Holds {
                witness: Composition::new(vec![6, 2]),
                min: BigInt::from(-10)
            }
        );
        assert_eq!(
            conjecture_probe(3, 6).unwrap(),
            Verdict::Holds {
                witness: Composition::new(vec![4, 1, 1]),
                min: BigInt::from(-18)
            }
        );
        assert_eq!(
            conjecture_probe(4, 4).unwrap().to_json().to_string(),
            r#"{"reason":"(q-1)n/q odd","verdict":"not-applicable"}"#
        );
        assert!(conjecture_probe(3, 4).is_err());
    }

    #[test]
    fn csv_export() {
        let rep = hadamard_representation(&GroupSpec::cyclic(3).unwrap(), 3).unwrap();
        let csv = rep.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("vertex(z=zeta_3),c0,c1,c2"));
        assert_eq!(lines.next(), Some("0 0 0,1,1,1"));
        assert_eq!(lines.next(), Some("0 0 1,1,1,z"));
        assert_eq!(lines.next(), Some("0 0 2,1,1,-1-z"));
        assert_eq!(csv.lines().count(), 28);
        assert!(!csv.contains('\r'));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn two_support_is_feasible(n in 1u32..40, q in 2u32..10, d in 1u32..40) {
                let d = 1 + (d - 1) % n;
                let sol = lp_two_support(n, q, d).unwrap();
                prop_assert!(sol.check().is_ok());
                prop_assert!(sol.objective > BigInt::from(0));
                if q * d >= (q - 1) * n {
                    prop_assert!(sol.objective <= BigInt::from(q * d));
                }
            }

            #[test]
            fn search_never_worse(n in 1u32..7, q in 2u32..4, d in 1u32..7) {
                let d = 1 + (d - 1) % n;
                let two = lp_two_support(n, q, d).unwrap();
                let best = lp_search(n, q, d, 3, 6).unwrap();
                prop_assert!(best.check().is_ok());
                prop_assert!(best.objective <= two.objective);
            }

            #[test]
            fn sampled_lp_representations_verify(n in 1u32..6, q in 2u32..5, d in 1u32..6, seed in any::<u64>()) {
                let d = 1 + (d - 1) % n;
                let sol = lp_two_support(n, q, d).unwrap();
                let rep = build_representation(&sol, &GroupSpec::cyclic(q).unwrap()).unwrap();
                let mode = VerifyMode::Sampled { count: 16, seed };
                prop_assert!(verify_representation(&rep, &hamming(n, q, d), mode).is_ok());
            }
        }
    }
}
