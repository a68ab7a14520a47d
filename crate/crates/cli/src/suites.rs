//! Self-check suites behind `verify`. Each suite prints one line per check
//! group and stops at the first failure, which names its witness.

use clap::ValueEnum;

use scheme_spectra::bounds::{
    build_representation, hadamard_representation, lp_two_support, verify_representation,
    VerifyMode,
};
use scheme_spectra::exactnum::CycInt;
use scheme_spectra::groups::{enumerate_compositions, Composition, GroupSpec, ShellLabel, Tuple};
use scheme_spectra::krawtchouk::{gen_kraw, gen_kraw_circulant, kraw, GenKrawMethod, KrawParams};
use scheme_spectra::schemes::{
    composition_spectrum, composition_spectrum_with, eigenvector_check, hamming_spectrum,
    projector_identity_check, verify_spectrum, CompositionGraphSpec, GraphSpec, HammingGraphSpec,
    PROJECTOR_MAX_VERTICES,
};

use crate::VerificationFailed;

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum Suite {
    Reciprocity,
    Projectors,
    Representations,
    Eigenvalues,
    All,
}

type Check = Result<String, String>;

fn fail(msg: String) -> Check {
    Err(msg)
}

fn small_groups(max_q: u32) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for q in 2..=max_q {
        out.push(GroupSpec::cyclic(q).expect("q >= 2"));
        if let Ok(f) = GroupSpec::field_of_order(q) {
            if q > 2 {
                out.push(f);
            }
        }
    }
    out
}

fn reciprocity(max_n: u32) -> Check {
    let mut count = 0u64;
    for q in 2..=5u32 {
        for n in 1..=max_n {
            let p = KrawParams { n, q };
            for i in 0..=n {
                for j in 0..=n {
                    let lhs = ShellLabel::Weight(j).size(q, n) * kraw(p, i, j).unwrap();
                    let rhs = ShellLabel::Weight(i).size(q, n) * kraw(p, j, i).unwrap();
                    if lhs != rhs {
                        return fail(format!("classical n={n} q={q} i={i} j={j}: {lhs} != {rhs}"));
                    }
                    count += 1;
                }
            }
        }
    }
    for g in small_groups(3) {
        let q = g.order();
        for n in 1..=max_n.min(5) {
            let comps: Vec<Composition> = enumerate_compositions(q, n).collect();
            for i in &comps {
                for j in &comps {
                    let kij = gen_kraw(&g, n, i, j, GenKrawMethod::Extraction)
                        .unwrap()
                        .value;
                    let kji = gen_kraw(&g, n, j, i, GenKrawMethod::Extraction)
                        .unwrap()
                        .value;
                    if kij.scale(&j.shell_size()) != kji.scale(&i.shell_size()) {
                        return fail(format!("{g} n={n} i={i} j={j}"));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} identities"))
}

fn projectors(max_n: u32) -> Check {
    let mut count = 0;
    for q in 2..=PROJECTOR_MAX_VERTICES as u32 {
        for n in 1..=max_n {
            if (q as u64).pow(n) > PROJECTOR_MAX_VERTICES {
                break;
            }
            if !projector_identity_check(n, q).unwrap() {
                return fail(format!("n={n} q={q}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} schemes"))
}

fn representations(max_n: u32) -> Check {
    let mut count = 0;
    for q in 2..=4u32 {
        let group = GroupSpec::cyclic(q).unwrap();
        for n in 1..=max_n {
            if (q as u64).pow(n) > 4096 {
                break;
            }
            for d in ((q - 1) * n).div_ceil(q).max(1)..=n {
                let sol = lp_two_support(n, q, d).map_err(|e| e.to_string())?;
                if sol.objective > (q * d).into() {
                    return fail(format!("H({n},{q},{d}): objective {} > qd", sol.objective));
                }
                let rep = build_representation(&sol, &group).map_err(|e| e.to_string())?;
                let spec = GraphSpec::Hamming(HammingGraphSpec::new(n, q, d).unwrap());
                verify_representation(&rep, &spec, VerifyMode::Full)
                    .map_err(|e| format!("{}: {e}", spec.name()))?;
                count += 1;
            }
        }
    }
    for g in small_groups(4) {
        let q = g.order();
        for n in (q..=max_n).step_by(q as usize) {
            let rep = hadamard_representation(&g, n).map_err(|e| e.to_string())?;
            let spec =
                GraphSpec::Composition(CompositionGraphSpec::hadamard(g.clone(), n).unwrap());
            verify_representation(&rep, &spec, VerifyMode::Full)
                .map_err(|e| format!("{}: {e}", spec.name()))?;
            count += 1;
        }
    }
    Ok(format!("{count} representations"))
}

fn eigenvalues(max_n: u32) -> Check {
    let mut count = 0;
    for q in 2..=5u32 {
        for n in 1..=max_n {
            for d in 1..=n {
                let spec = HammingGraphSpec::new(n, q, d).unwrap();
                verify_spectrum(&hamming_spectrum(&spec))
                    .map_err(|e| format!("H({n},{q},{d}): {e}"))?;
                count += 1;
            }
            if (q as u64).pow(n) <= 729 {
                let all: Vec<Tuple> = (0..(q as u64).pow(n))
                    .map(|i| Tuple::from_index(i, q, n as usize))
                    .collect();
                let g = GraphSpec::Hamming(HammingGraphSpec::new(n, q, n.div_ceil(2)).unwrap());
                for w in 0..=n {
                    let mut x = vec![0u32; n as usize];
                    x[..w as usize].fill(1);
                    if !eigenvector_check(&g, &Tuple(x.clone()), &all).unwrap() {
                        return fail(format!("{}: phi_{x:?} is not an eigenvector", g.name()));
                    }
                }
            }
        }
    }
    for g in small_groups(4) {
        let q = g.order();
        for n in (q..=max_n).step_by(q as usize) {
            let spec = CompositionGraphSpec::hadamard(g.clone(), n).unwrap();
            let a = composition_spectrum(&spec);
            let b = composition_spectrum_with(&spec, GenKrawMethod::Brute);
            if a != b {
                return fail(format!(
                    "Omega_{n}^({g}): extraction and character sums differ"
                ));
            }
            verify_spectrum(&a).map_err(|e| format!("Omega_{n}^({g}): {e}"))?;
            count += 1;
        }
    }
    for q in 2..=4u32 {
        let g = GroupSpec::cyclic(q).unwrap();
        for n in (q..=max_n.max(q)).step_by(q as usize) {
            let bal = Composition::balanced(q, n).unwrap();
            let sign = if ((q - 1) * n / q) % 2 == 0 { 1 } else { -1 };
            for r in enumerate_compositions(q, n) {
                let v = gen_kraw(&g, n, &bal, &r, GenKrawMethod::Extraction)
                    .unwrap()
                    .value;
                let moment: u32 = r
                    .counts()
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| i as u32 * c)
                    .sum();
                if !moment.is_multiple_of(q) && !v.is_zero() {
                    return fail(format!("Z_{q} n={n}: K({r}) = {v}, expected 0"));
                }
                let s = gen_kraw(&g, n, &bal, &r.shift_left(), GenKrawMethod::Extraction)
                    .unwrap()
                    .value;
                if s != v.scale(&sign.into()) {
                    return fail(format!("Z_{q} n={n}: shift of {r} gives {s}, base {v}"));
                }
                let c = gen_kraw_circulant(q, n, &r).map_err(|e| e.to_string())?;
                if CycInt::from_int(g.root_order(), c.clone()) != v {
                    return fail(format!(
                        "Z_{q} n={n}: circulant route {c} at {r}, generic {v}"
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} spectra and lemma instances"))
}

type Entry = (Suite, &'static str, fn(u32) -> Check);

pub fn run(suite: Suite, max_n: u32) -> anyhow::Result<()> {
    let all: [Entry; 4] = [
        (Suite::Reciprocity, "reciprocity", reciprocity),
        (Suite::Projectors, "projectors", projectors),
        (Suite::Representations, "representations", representations),
        (Suite::Eigenvalues, "eigenvalues", eigenvalues),
    ];
    for (s, name, check) in all {
        if suite != Suite::All && suite != s {
            continue;
        }
        match check(max_n) {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(witness) => {
                println!("FAIL {name}: {witness}");
                return Err(VerificationFailed(format!("{name} suite failed: {witness}")).into());
            }
        }
    }
    Ok(())
}
