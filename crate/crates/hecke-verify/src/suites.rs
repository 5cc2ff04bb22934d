//! Suite builders: each maps the resolved flags to one merged report.
//!
//! A builder returning `Err` means some hypothesis needed to even state the
//! identity could not be established on this instance (no good coset
//! representative, an inconsistent ramification datum, an empty sphere).
//! The driver folds that into a failing report rather than a crash: a
//! hypothesis that cannot be met on a legal instance is itself a
//! verification result, not a usage error.

use std::collections::BTreeMap;
use std::fs;
use std::sync::Arc;

use affine_hecke::coefficients::{int, rat, ParamSpec};
use affine_hecke::coxeter_complex::complex_check;
use affine_hecke::dualities::{
    build_ramification, chi_intertwiner_check, hl_analogue_check, hl_character_check,
    kato_check, solomon_check, Corruption, EAlgebra, RamificationDatum, RamificationMode,
};
use affine_hecke::error::{Error, Result};
use affine_hecke::hecke::HeckeAlgebra;
use affine_hecke::hecke_modules::HeckeModule;
use affine_hecke::report::VerificationReport;
use affine_hecke::root_datum::{
    build_root_datum, parse_datum_file, CartanType, ParamAssignment, RootDatum,
};
use affine_hecke::weyl::{irreducible_characters, ClassFunction, Subgroup, WeylGroup};
use num_rational::BigRational;

/// Which suite(s) to run.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    Solomon,
    HlChar,
    KatoFinite,
    KatoAffine,
    HlAnalogue,
    Complex,
    All,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Solomon => "solomon",
            Kind::HlChar => "hl-char",
            Kind::KatoFinite => "kato-finite",
            Kind::KatoAffine => "kato-affine",
            Kind::HlAnalogue => "hl-analogue",
            Kind::Complex => "complex",
            Kind::All => "all",
        }
    }
}

/// Everything the suites need, resolved from the flags exactly once.
pub(crate) struct Setup {
    datum: RootDatum,
    alg: Arc<HeckeAlgebra>,
    spec: ParamSpec,
    /// Parameter values after broadcasting, one per parameter class.
    q: Vec<BigRational>,
    bound: usize,
    /// Base subset, converted to 0-based node indices.
    i0: Vec<usize>,
    corrupt: Corruption,
}

impl Setup {
    /// Resolve the datum, algebra and parameters.  Every error here is a
    /// usage error: the flags themselves do not describe a legal instance.
    pub(crate) fn from_args(a: &crate::CommonArgs) -> std::result::Result<Setup, String> {
        let (datum, assignment) = if let Some(path) = &a.datum {
            let text = fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_datum_file(&text).map_err(|e| e.to_string())?
        } else {
            let name = a
                .cartan_type
                .as_deref()
                .ok_or("one of --type or --datum is required")?;
            let name = name.trim();
            let cartan: CartanType = if name.len() > 1
                && name[1..].chars().all(|c| c.is_ascii_digit())
            {
                let t: CartanType = name.parse().map_err(|e: Error| e.to_string())?;
                if a.rank.is_some_and(|r| r != t.rank) {
                    return Err(format!("--rank contradicts the rank embedded in {name:?}"));
                }
                t
            } else {
                let rank = a
                    .rank
                    .ok_or("--rank is required when --type has no embedded rank")?;
                format!("{name}{rank}").parse().map_err(|e: Error| e.to_string())?
            };
            let datum = build_root_datum(cartan.family, cartan.rank, a.lattice)
                .map_err(|e| e.to_string())?;
            let assignment = ParamAssignment::equal_parameters(&datum);
            (datum, assignment)
        };

        let mut i0 = Vec::new();
        for &ix in &a.i0 {
            if ix == 0 || ix > datum.rank {
                return Err(format!(
                    "--I0 index {ix} out of range 1..={} for {}",
                    datum.rank, datum.cartan_type
                ));
            }
            i0.push(ix - 1);
        }
        i0.sort_unstable();
        i0.dedup();

        let alg = Arc::new(HeckeAlgebra::new(&datum, &assignment).map_err(|e| e.to_string())?);
        let n = alg.params.nvars;
        if a.q.is_empty() {
            return Err("--q needs at least one value".into());
        }
        let q: Vec<BigRational> = if a.q.len() == n {
            a.q.iter().map(|&v| int(v)).collect()
        } else if a.q.len() == 1 {
            vec![int(a.q[0]); n]
        } else {
            return Err(format!(
                "this datum has {n} parameter classes but --q gave {} values",
                a.q.len()
            ));
        };
        let spec = alg.params.spec_from_values(&q).map_err(|e| e.to_string())?;

        Ok(Setup {
            datum,
            alg,
            spec,
            q,
            bound: a.bound,
            i0,
            corrupt: if a.corrupt_sign {
                Corruption::FlipDualSign
            } else {
                Corruption::None
            },
        })
    }
}

pub(crate) fn run(kind: Kind, s: &Setup) -> Vec<VerificationReport> {
    let kinds = match kind {
        Kind::All => vec![
            Kind::Solomon,
            Kind::HlChar,
            Kind::KatoFinite,
            Kind::KatoAffine,
            Kind::HlAnalogue,
            Kind::Complex,
        ],
        k => vec![k],
    };
    kinds
        .into_iter()
        .map(|k| match build(k, s) {
            Ok(mut rep) => {
                rep.wall_time_ms = None;
                rep
            }
            Err(e) => {
                let mut rep = VerificationReport::new(k.name(), datum_label(s));
                rep.record("hypothesis", e.to_string(), "a verifiable instance", false);
                rep
            }
        })
        .collect()
}

fn build(kind: Kind, s: &Setup) -> Result<VerificationReport> {
    match kind {
        Kind::Solomon => solomon(s),
        Kind::HlChar => hl_char(s),
        Kind::KatoFinite => kato_finite(s),
        Kind::KatoAffine => kato_affine(s),
        Kind::HlAnalogue => hl_analogue(s),
        Kind::Complex => complex(s),
        Kind::All => unreachable!("expanded by run"),
    }
}

fn datum_label(s: &Setup) -> String {
    format!("{} {}-lattice", s.datum.cartan_type, s.datum.lattice_kind)
}

fn q_label(s: &Setup) -> String {
    let qs: Vec<String> = s.q.iter().map(|v| v.to_string()).collect();
    qs.join(", ")
}

fn i0_label(i0: &[usize]) -> String {
    let names: Vec<String> = i0.iter().map(|&i| format!("s{}", i + 1)).collect();
    names.join(", ")
}

/// The linear characters of a small subgroup that the suites exercise:
/// always the trivial one, the sign restriction when it stays nontrivial,
/// and for a group of order two the character that is -1 off the identity
/// (the sign restriction can collapse to trivial when the nontrivial
/// element is an even permutation of the roots).
fn linear_characters(w: &WeylGroup, h: &Subgroup) -> Vec<ClassFunction> {
    let mut out = vec![ClassFunction::trivial(w, h)];
    let sgn = ClassFunction::sign(w, h);
    if !out.contains(&sgn) {
        out.push(sgn);
    }
    if h.order() == 2 {
        let flip = ClassFunction::from_fn(w, h, |g| int(if g == w.identity() { 1 } else { -1 }));
        if !out.contains(&flip) {
            out.push(flip);
        }
    }
    out
}

fn solomon(s: &Setup) -> Result<VerificationReport> {
    let w = &s.alg.aw.w;
    let irr = irreducible_characters(w);
    let mut top = VerificationReport::new(
        "solomon",
        format!("{}, all {} irreducible characters", datum_label(s), irr.len()),
    );
    for (k, chi) in irr.iter().enumerate() {
        let rep = solomon_check(w, chi, s.corrupt)?;
        top.absorb(&format!("χ{}", k + 1), &rep);
    }
    Ok(top)
}

fn hl_char(s: &Setup) -> Result<VerificationReport> {
    let w = &s.alg.aw.w;
    let stab = w.stabilizer_s_i0(&s.i0);
    let mut top = VerificationReport::new(
        "hl-char",
        format!(
            "{}, I0 = {{{}}}, stabilizer order {}",
            datum_label(s),
            i0_label(&s.i0),
            stab.order()
        ),
    );
    let mut subgroups = vec![Subgroup::from_ids(w, &[w.identity()])];
    if stab.order() > 1 {
        subgroups.push(stab);
    }
    for (hk, h) in subgroups.iter().enumerate() {
        for (ck, chi) in linear_characters(w, h).iter().enumerate() {
            let rep = hl_character_check(w, &s.i0, h, chi, s.corrupt)?;
            top.absorb(&format!("H{} χ{}", hk + 1, ck + 1), &rep);
        }
    }
    Ok(top)
}

fn kato_finite(s: &Setup) -> Result<VerificationReport> {
    let rank = s.datum.rank;
    let all: Vec<usize> = (0..rank).collect();
    let mut top = VerificationReport::new(
        "kato-finite",
        format!("{}, q = [{}], complete trace basis", datum_label(s), q_label(s)),
    );
    // Every consistent one-dimensional module: T_s -> q_s or -1 per node,
    // kept when the braid relations allow the mix.
    let qs: Vec<BigRational> =
        (0..rank).map(|i| s.alg.params.q_of_gen(i).specialize(&s.spec)).collect();
    for mask in 0u32..(1 << rank) {
        let values: BTreeMap<usize, BigRational> = (0..rank)
            .map(|i| (i, if mask & (1 << i) != 0 { qs[i].clone() } else { int(-1) }))
            .collect();
        let m = match HeckeModule::finite_one_dim(&s.alg, &s.spec, &all, &values) {
            Ok(m) => m,
            Err(Error::NotAModule(_)) => continue,
            Err(e) => return Err(e),
        };
        let pattern: Vec<String> = (0..rank)
            .map(|i| if mask & (1 << i) != 0 { format!("q{}", i + 1) } else { "-1".into() })
            .collect();
        top.absorb(
            &format!("one-dim ({})", pattern.join(", ")),
            &kato_check(&m, 0, s.corrupt)?,
        );
    }
    // One induced module, from the parabolic on all nodes but the last.
    let from: Vec<usize> = (0..rank.saturating_sub(1)).collect();
    let ind = HeckeModule::finite_trivial(&s.alg, &s.spec, &from)?.ind_to(&all)?;
    top.absorb(
        &format!("induced dim {}", ind.dim()),
        &kato_check(&ind, 0, s.corrupt)?,
    );
    Ok(top)
}

/// Three deterministic generic points: integral, half-integral, negative.
fn generic_points(rank: usize) -> Vec<Vec<BigRational>> {
    const PRIMES: [i64; 6] = [5, 7, 11, 13, 17, 19];
    vec![
        (0..rank).map(|i| int(PRIMES[i])).collect(),
        (0..rank).map(|i| rat(PRIMES[i + 1], 2)).collect(),
        (0..rank).map(|i| -int(PRIMES[i + 2])).collect(),
    ]
}

fn kato_affine(s: &Setup) -> Result<VerificationReport> {
    let points = generic_points(s.datum.rank);
    let mut top = VerificationReport::new(
        "kato-affine",
        format!(
            "{}, q = [{}], principal series at {} generic points, traces over ℓ(w) ≤ {}",
            datum_label(s),
            q_label(s),
            points.len(),
            s.bound
        ),
    );
    for t in &points {
        let m = HeckeModule::theta_character(&s.alg, &s.spec, t)?.ind_full()?;
        let coords: Vec<String> = t.iter().map(|c| c.to_string()).collect();
        let label = format!("t = ({})", coords.join(", "));
        top.absorb(&label, &kato_check(&m, s.bound, s.corrupt)?);
        top.absorb(&format!("intertwiner {label}"), &chi_intertwiner_check(&m, s.corrupt)?);
    }
    Ok(top)
}

/// Build the ramification datum, broadcasting a single parameter value to
/// however many members the simple set turns out to have.
fn ramification_broadcast(
    w: &WeylGroup,
    i0: &[usize],
    mode: RamificationMode,
    q: &[BigRational],
) -> Result<RamificationDatum> {
    match build_ramification(w, i0, mode, q, true) {
        Ok(rd) => return Ok(rd),
        Err(Error::InconsistentParameters(_)) => {}
        Err(e) => return Err(e),
    }
    let p = q[0].clone();
    let mut last = Error::InconsistentParameters("no parameter count fits".into());
    for k in 1..=w.datum.roots.len().max(1) {
        if k == q.len() {
            continue;
        }
        match build_ramification(w, i0, mode, &vec![p.clone(); k], true) {
            Ok(rd) => return Ok(rd),
            Err(Error::InconsistentParameters(m)) => last = Error::InconsistentParameters(m),
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn hl_analogue(s: &Setup) -> Result<VerificationReport> {
    let w = &s.alg.aw.w;
    let mode = if s.i0.is_empty() {
        RamificationMode::Degenerate
    } else {
        RamificationMode::FullStabilizer
    };
    let rd = ramification_broadcast(w, &s.i0, mode, &s.q)?;
    let ea = EAlgebra::new(w, rd)?;
    let mut top = VerificationReport::new(
        "hl-analogue",
        format!(
            "{}, I0 = {{{}}}, p = {}, algebra order {}",
            datum_label(s),
            i0_label(&s.i0),
            s.q[0],
            ea.order()
        ),
    );
    let mods = ea.one_dim_modules()?;
    let n1 = mods.len();
    for (k, m) in mods.iter().enumerate() {
        top.absorb(&format!("one-dim {}", k + 1), &hl_analogue_check(w, &ea, m, s.corrupt)?);
    }
    if mode == RamificationMode::Degenerate && s.datum.rank >= 2 {
        let ind = ea.ind(w, &ea.res(&mods[n1 - 1], &[0]))?;
        top.absorb(
            &format!("induced dim {}", ind.dim),
            &hl_analogue_check(w, &ea, &ind, s.corrupt)?,
        );
    }
    Ok(top)
}

fn complex(s: &Setup) -> Result<VerificationReport> {
    complex_check(&s.alg.aw.w, &s.i0, s.corrupt)
}
