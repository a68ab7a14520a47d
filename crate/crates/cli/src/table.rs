//! `table`: one CSV row per graph in a parameter grid.

use num_bigint::BigInt;
use num_rational::BigRational;
use scheme_spectra::bounds::{bound_report, lp_two_support, BoundReport, Verdict};
use scheme_spectra::exactnum::{binom, entropy_q, pow_int};
use scheme_spectra::groups::{prime_power, GroupSpec};
use scheme_spectra::krawtchouk::smallest_root_ratio;
use scheme_spectra::schemes::{
    hamming_spectrum, hoffman_bound, CompositionGraphSpec, GraphSpec, HammingGraphSpec,
};

#[derive(Debug, PartialEq, Eq)]
pub struct Grid {
    pub max_n: u32,
    pub qs: Vec<u32>,
}

/// Parses `n≤N,q∈{a,b,...}`; `<=` and `in` (or `=`) are accepted too.
pub fn parse_grid(text: &str) -> Result<Grid, String> {
    let norm = text.replace('≤', "<=").replace('∈', " in ");
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0, 0);
    for (i, ch) in norm.char_indices() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&norm[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&norm[start..]);
    let (mut max_n, mut qs) = (None, None);
    for part in parts {
        let part = part.trim();
        if let Some(rest) = part.strip_prefix('n') {
            let rest = rest.trim_start();
            let value = rest
                .strip_prefix("<=")
                .ok_or_else(|| format!("expected n<=N in {part:?}"))?;
            max_n = Some(
                value
                    .trim()
                    .parse::<u32>()
                    .map_err(|e| format!("bad n bound {value:?}: {e}"))?,
            );
        } else if let Some(rest) = part.strip_prefix('q') {
            let rest = rest.trim_start();
            let rest = rest
                .strip_prefix("in")
                .or_else(|| rest.strip_prefix('='))
                .ok_or_else(|| format!("expected q in {{...}} in {part:?}"))?
                .trim();
            let inner = rest
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| format!("expected braces in {part:?}"))?;
            let values = inner
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<u32>()
                        .map_err(|e| format!("bad q {v:?}: {e}"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if values.iter().any(|&q| q < 2) {
                return Err("q must be at least 2".into());
            }
            qs = Some(values);
        } else {
            return Err(format!("unknown grid component {part:?}"));
        }
    }
    Ok(Grid {
        max_n: max_n.ok_or("grid needs an n bound")?,
        qs: qs.ok_or("grid needs a q set")?,
    })
}

struct Rows(csv::Writer<Vec<u8>>);

impl Rows {
    fn new() -> Self {
        Rows(
            csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new()),
        )
    }

    fn row<I: IntoIterator<Item = S>, S: AsRef<[u8]>>(&mut self, fields: I) -> anyhow::Result<()> {
        Ok(self.0.write_record(fields)?)
    }

    fn finish(self) -> anyhow::Result<String> {
        Ok(String::from_utf8(self.0.into_inner()?)?)
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn upper_table(grid: &Grid) -> anyhow::Result<String> {
    let mut w = Rows::new();
    w.row([
        "n",
        "q",
        "d",
        "case",
        "lp_objective",
        "closed_form_upper",
        "mrrw_exponent",
    ])?;
    for &q in &grid.qs {
        for n in 1..=grid.max_n {
            let t = (q - 1) * n;
            for d in 1..=n {
                let qd = q * d;
                let (case, closed): (&str, Option<BigInt>) = if qd >= t {
                    ("plotkin", Some(qd.into()))
                } else if (t - qd) * (t - qd) < t {
                    let v = BigInt::from(2) * pow_int(q as u64 - 1, 2) * binom(n as u64, 2);
                    ("window", Some(v))
                } else {
                    ("mrrw", None)
                };
                let mrrw = (qd < t).then(|| {
                    let x = smallest_root_ratio(q, d as f64 / n as f64)
                        .clamp(0.0, (q - 1) as f64 / q as f64);
                    format!("{:.6}", entropy_q(q, x).unwrap_or(f64::NAN))
                });
                let sol = lp_two_support(n, q, d)?;
                w.row([
                    n.to_string(),
                    q.to_string(),
                    d.to_string(),
                    case.to_string(),
                    sol.objective.to_string(),
                    opt(closed),
                    opt(mrrw),
                ])?;
            }
        }
    }
    w.finish()
}

fn lower_table(grid: &Grid) -> anyhow::Result<String> {
    let mut w = Rows::new();
    w.row([
        "n",
        "q",
        "d",
        "case",
        "closed_form_lower",
        "hoffman",
        "agree",
    ])?;
    for &q in grid.qs.iter().filter(|&&q| q >= 3) {
        for n in 1..=grid.max_n {
            let t = (q - 1) * n;
            for d in 1..=n {
                let qd = q * d;
                if qd < t {
                    continue;
                }
                let (case, closed) = if qd == t {
                    (
                        "balanced",
                        BigRational::from_integer(((q - 1) * (n - 1) + 1).into()),
                    )
                } else {
                    ("above", BigRational::new(qd.into(), (qd - t).into()))
                };
                let h = hoffman_bound(&hamming_spectrum(&HammingGraphSpec::new(n, q, d)?))?;
                w.row([
                    n.to_string(),
                    q.to_string(),
                    d.to_string(),
                    case.to_string(),
                    closed.to_string(),
                    h.to_string(),
                    (h == closed).to_string(),
                ])?;
            }
        }
    }
    w.finish()
}

fn conjecture_cell(r: &BoundReport) -> String {
    match &r.conjecture {
        Some(Verdict::Holds { .. }) => "holds".into(),
        Some(Verdict::Fails { .. }) => "fails".into(),
        Some(Verdict::NotApplicable { .. }) => "not-applicable".into(),
        None => String::new(),
    }
}

fn hadamard_table(grid: &Grid) -> anyhow::Result<String> {
    let mut w = Rows::new();
    w.row([
        "n",
        "q",
        "group",
        "hoffman_lower",
        "representation_upper",
        "exact",
        "conjecture",
    ])?;
    for &q in &grid.qs {
        for n in (q..=grid.max_n).step_by(q as usize) {
            let mut groups = vec![GroupSpec::cyclic(q)?];
            if let Some((p, k)) = prime_power(q) {
                groups.push(GroupSpec::field(p, k)?);
            }
            for g in groups {
                let name = g.name();
                let spec = GraphSpec::Composition(CompositionGraphSpec::hadamard(g, n)?);
                let r = bound_report(&spec);
                let pick = |v: &[scheme_spectra::bounds::Bound], tag: &str| {
                    v.iter()
                        .find(|b| b.provenance == tag)
                        .map(|b| b.value.to_string())
                };
                w.row([
                    n.to_string(),
                    q.to_string(),
                    name,
                    opt(pick(&r.lower, "hoffman")),
                    opt(pick(&r.upper, "hadamard-representation")),
                    opt(r.exact.as_ref()),
                    conjecture_cell(&r),
                ])?;
            }
        }
    }
    w.finish()
}

pub fn render(theorem: &str, grid: &Grid) -> anyhow::Result<String> {
    match theorem {
        "1.1" => upper_table(grid),
        "1.2" => lower_table(grid),
        "1.3" => hadamard_table(grid),
        other => anyhow::bail!("unknown theorem {other}"),
    }
}
