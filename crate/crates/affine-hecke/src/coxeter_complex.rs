//! The Coxeter complex as a simplicial sphere, and its perpendicular
//! subcomplexes.
//!
//! Simplices are the left cosets wW_I for proper subsets I ⊊ S, with
//! wW_I a face of w'W_{I'} exactly when wW_I ⊇ w'W_{I'}; the simplex wW_I
//! has the |S∖I| vertices {wW_{S∖{s}} : s ∈ S∖I}.  The whole complex
//! triangulates the unit sphere S^{n−1}, one top simplex per chamber.
//!
//! For a base subset I0 the subcomplex carried by the subspace I0⊥ consists
//! of the cosets wW_I whose closed region lies inside I0⊥; unwinding the
//! incidence geometry, that is the condition w⁻¹ ∈ C_{I0}(I) where
//! C_{I0}(I) = {v : vI0 ⊂ ⟨I⟩}.  Since C_{I0}(I) is closed under left
//! multiplication by W_I, the condition depends only on the coset, and the
//! g-fixed cosets (g·wW_I = wW_I) biject with right cosets W_Iv ⊆ C_{I0}(I)
//! fixed under right multiplication — which is what ties the fixed-point
//! counts to induced characters in [`fixed_coset_count`].
//!
//! Chains are taken over ℚ.  A simplex is oriented by listing its vertex
//! labels s ∈ S∖I in the global node order; the boundary drops the
//! position-i vertex with sign (−1)^i, so ∂² = 0 by the usual transposition
//! argument.  Left translation permutes same-degree simplices and preserves
//! vertex labels, so the action matrices are plain permutations that commute
//! with ∂; the sign representation on top homology emerges from the cycle
//! structure, not from decorated matrices.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::coefficients::int;
use crate::dualities::{set_label, word_label, Corruption};
use crate::error::{Error, Result};
use crate::linalg::QMat;
use crate::report::VerificationReport;
use crate::weyl::{subsets_of, ClassFunction, Subgroup, WeylGroup};

/// One simplex: the left coset `rep`·W_{i_set}, keyed by its smallest member.
pub type Simplex = (Vec<usize>, usize);

/// A Coxeter complex or one of its perpendicular subcomplexes, with
/// simplices grouped by degree r = |S∖I| − 1.
#[derive(Debug, Clone)]
pub struct CoxeterComplex {
    pub i0: Vec<usize>,
    /// degrees[r] lists the degree-r simplices sorted by (i_set, rep).
    pub degrees: Vec<Vec<Simplex>>,
    index: Vec<BTreeMap<Simplex, usize>>,
    /// Parabolic member ids per occurring i_set, for canonical rep lookups.
    subs: BTreeMap<Vec<usize>, Vec<usize>>,
}

impl CoxeterComplex {
    /// Canonical key of the coset x·W_{i_set}.
    pub fn canon(&self, w: &WeylGroup, i_set: &[usize], x: usize) -> Simplex {
        let members = &self.subs[i_set];
        let rep = members.iter().map(|&u| w.mul(x, u)).min().unwrap();
        (i_set.to_vec(), rep)
    }

    pub fn n_degrees(&self) -> usize {
        self.degrees.len()
    }

    /// Position of a simplex inside its degree list.
    pub fn position(&self, degree: usize, key: &Simplex) -> Option<usize> {
        self.index[degree].get(key).copied()
    }

    /// Total number of simplices.
    pub fn size(&self) -> usize {
        self.degrees.iter().map(|d| d.len()).sum()
    }
}

/// The full Coxeter complex of W: Σ_{I ⊊ S} |W|/|W_I| simplices
/// triangulating S^{n−1}.
pub fn build_complex(w: &WeylGroup) -> CoxeterComplex {
    build_subcomplex(w, &[]).expect("the empty base is always proper")
}

/// The subcomplex of simplices lying in I0⊥: cosets wW_I with
/// w⁻¹ ∈ C_{I0}(I).  The base I0 = S leaves the empty sphere and is
/// rejected.
pub fn build_subcomplex(w: &WeylGroup, i0: &[usize]) -> Result<CoxeterComplex> {
    let n = w.datum.rank;
    let mut i0: Vec<usize> = i0.to_vec();
    i0.sort_unstable();
    i0.dedup();
    if i0.len() == n {
        return Err(Error::EmptySphere);
    }
    let mut degrees: Vec<Vec<Simplex>> = vec![Vec::new(); n];
    let mut subs: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for i_set in subsets_of(n) {
        if i_set.len() == n {
            continue;
        }
        let members = w.parabolic(&i_set).ids;
        let c = w.c_set(&i0, &i_set);
        let mut reps: Vec<usize> = c
            .iter()
            .map(|&v| {
                let x = w.inv(v);
                members.iter().map(|&u| w.mul(x, u)).min().unwrap()
            })
            .collect();
        reps.sort_unstable();
        reps.dedup();
        let r = n - i_set.len() - 1;
        degrees[r].extend(reps.into_iter().map(|rep| (i_set.clone(), rep)));
        subs.insert(i_set, members);
    }
    for d in &mut degrees {
        d.sort();
    }
    let index = degrees
        .iter()
        .map(|d| d.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();
    Ok(CoxeterComplex { i0, degrees, index, subs })
}

/// Rational chains of a (sub)complex together with the action of a chosen
/// subgroup.  Boundaries and actions are verified at construction:
/// ∂∘∂ = 0 and A_g∘∂ = ∂∘A_g for every carried g.
#[derive(Debug, Clone)]
pub struct ChainComplexQ {
    pub dims: Vec<usize>,
    /// boundaries[r]: C_r → C_{r−1}; the r = 0 entry is the zero map out.
    pub boundaries: Vec<QMat>,
    pub group: Subgroup,
    actions: BTreeMap<usize, Vec<QMat>>,
}

impl ChainComplexQ {
    pub fn action(&self, g: usize, degree: usize) -> &QMat {
        &self.actions[&g][degree]
    }

    /// Betti numbers dim ker ∂_r − dim im ∂_{r+1}.
    pub fn betti(&self) -> Vec<usize> {
        let n = self.dims.len();
        (0..n)
            .map(|r| {
                let ker = self.dims[r] - self.boundaries[r].rank();
                let im = if r + 1 < n { self.boundaries[r + 1].rank() } else { 0 };
                ker - im
            })
            .collect()
    }

    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(r, &d)| if r % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Assemble boundary and action matrices over the simplices of `cx`.
/// Every element of `group` must map the complex into itself (left
/// translation): for a proper subcomplex that restricts the usable group to
/// the stabilizer of the base.
pub fn chain_complex(
    w: &WeylGroup,
    cx: &CoxeterComplex,
    group: &Subgroup,
) -> Result<ChainComplexQ> {
    let n = cx.n_degrees();
    let dims: Vec<usize> = cx.degrees.iter().map(|d| d.len()).collect();

    let mut boundaries = Vec::with_capacity(n);
    boundaries.push(QMat::zeros(0, dims[0]));
    for r in 1..n {
        let mut b = QMat::zeros(dims[r - 1], dims[r]);
        for (col, (i_set, rep)) in cx.degrees[r].iter().enumerate() {
            let labels: Vec<usize> =
                (0..w.datum.rank).filter(|s| !i_set.contains(s)).collect();
            for (pos, &s) in labels.iter().enumerate() {
                let mut face_i = i_set.clone();
                face_i.push(s);
                face_i.sort_unstable();
                let key = cx.canon(w, &face_i, *rep);
                let row = cx.position(r - 1, &key).ok_or_else(|| {
                    Error::AssumptionViolated("a face left the subcomplex".into())
                })?;
                let sign = int(if pos % 2 == 0 { 1 } else { -1 });
                b[(row, col)] = &b[(row, col)] + &sign;
            }
        }
        boundaries.push(b);
    }
    for r in 2..n {
        if !boundaries[r - 1].mul(&boundaries[r]).is_zero() {
            return Err(Error::AssumptionViolated(
                "the boundary does not square to zero".into(),
            ));
        }
    }

    let mut actions = BTreeMap::new();
    for &g in &group.ids {
        let mut per_degree = Vec::with_capacity(n);
        for r in 0..n {
            let mut a = QMat::zeros(dims[r], dims[r]);
            for (col, (i_set, rep)) in cx.degrees[r].iter().enumerate() {
                let key = cx.canon(w, i_set, w.mul(g, *rep));
                let row = cx.position(r, &key).ok_or(Error::NotInNormalizer)?;
                a[(row, col)] = int(1);
            }
            per_degree.push(a);
        }
        for r in 1..n {
            if per_degree[r - 1].mul(&boundaries[r])
                != boundaries[r].mul(&per_degree[r])
            {
                return Err(Error::AssumptionViolated(
                    "the translation action does not commute with the boundary".into(),
                ));
            }
        }
        actions.insert(g, per_degree);
    }

    Ok(ChainComplexQ { dims, boundaries, group: group.clone(), actions })
}

fn subspace_trace(basis: &QMat, a: &QMat) -> Result<BigRational> {
    if basis.cols == 0 {
        return Ok(BigRational::zero());
    }
    let x = basis.solve(&a.mul(basis)).ok_or_else(|| {
        Error::AssumptionViolated("the action does not preserve the subspace".into())
    })?;
    Ok(x.trace())
}

/// Characters of the group action on each homology space H_r = ker ∂_r /
/// im ∂_{r+1}, computed from exact kernel and image bases: the quotient
/// trace is the kernel trace minus the image trace.
pub fn homology_characters(
    w: &WeylGroup,
    cc: &ChainComplexQ,
) -> Result<Vec<ClassFunction>> {
    let n = cc.dims.len();
    let mut out = Vec::with_capacity(n);
    for r in 0..n {
        let ker = if r == 0 {
            QMat::identity(cc.dims[0])
        } else {
            cc.boundaries[r].kernel_basis()
        };
        let im = if r + 1 < n {
            cc.boundaries[r + 1].image_basis()
        } else {
            QMat::zeros(cc.dims[r], 0)
        };
        let mut values: BTreeMap<usize, BigRational> = BTreeMap::new();
        for &g in &cc.group.ids {
            let a = cc.action(g, r);
            values.insert(g, subspace_trace(&ker, a)? - subspace_trace(&im, a)?);
        }
        out.push(ClassFunction::from_fn(w, &cc.group, |g| values[&g].clone()));
    }
    Ok(out)
}

/// The Lefschetz number of g computed three independent ways: the
/// alternating chain trace, the alternating homology trace, and the Euler
/// characteristic of the g-fixed subcomplex (setwise-fixed cosets are
/// pointwise-fixed simplices here, so the count is honest).
pub fn lefschetz(
    w: &WeylGroup,
    cx: &CoxeterComplex,
    cc: &ChainComplexQ,
    homology: &[ClassFunction],
    g: usize,
) -> Result<(BigRational, BigRational, BigRational)> {
    if !cc.group.contains(g) {
        return Err(Error::IllegalParameter(
            "the element lies outside the acting group".into(),
        ));
    }
    let mut chain = BigRational::zero();
    let mut fixed = BigRational::zero();
    let mut hom = BigRational::zero();
    for r in 0..cc.dims.len() {
        let sign = int(if r % 2 == 0 { 1 } else { -1 });
        chain = chain + cc.action(g, r).trace() * &sign;
        let n_fixed = cx.degrees[r]
            .iter()
            .filter(|(i_set, rep)| cx.canon(w, i_set, w.mul(g, *rep)) == (i_set.clone(), *rep))
            .count();
        fixed = fixed + int(n_fixed as i64) * &sign;
        hom = hom + homology[r].value(g) * &sign;
    }
    Ok((chain, hom, fixed))
}

/// Count the h-fixed degree-(n−|I|−1) cosets of the subcomplex directly,
/// and again through the double-coset expansion
/// Σ_{W_I\C_{I0}(I)/H} (Ind_{H∩W_I^v}^H 1)(h).  The two agree; both values
/// are returned for the caller to compare.
pub fn fixed_coset_count(
    w: &WeylGroup,
    cx: &CoxeterComplex,
    h_group: &Subgroup,
    h: usize,
    i_set: &[usize],
) -> Result<(i64, BigRational)> {
    if !h_group.contains(h) {
        return Err(Error::IllegalParameter(
            "the element lies outside the chosen subgroup".into(),
        ));
    }
    let n = w.datum.rank;
    let r = n - i_set.len() - 1;
    let direct = cx.degrees[r]
        .iter()
        .filter(|(j_set, rep)| {
            j_set == i_set
                && cx.canon(w, j_set, w.mul(h, *rep)) == (j_set.clone(), *rep)
        })
        .count() as i64;

    let c = w.c_set(&cx.i0, i_set);
    let mut via_chars = BigRational::zero();
    if !c.is_empty() {
        for v in w.double_coset_reps(i_set, h_group, &c, None)? {
            let k = w.parabolic(i_set).conjugated(w, v).intersect(w, h_group);
            let ind = ClassFunction::trivial(w, &k).induce(w, h_group)?;
            via_chars = via_chars + ind.value(h);
        }
    }
    Ok((direct, via_chars))
}

fn char_digest(group: &Subgroup, chi: &ClassFunction) -> String {
    let e = group.ids.iter().min().copied().unwrap_or(0);
    let norm = group
        .ids
        .iter()
        .fold(BigRational::zero(), |acc, &g| acc + chi.value(g) * chi.value(g));
    format!("χ(e)={} Σχ²={}", chi.value(e), norm)
}

/// Full verification report for the sphere package: Betti numbers of the
/// expected sphere, end homology characters (full complex), the Lefschetz
/// number of every acting element computed three ways and against the
/// closed form 1 + (−1)^{n−|I0|−1}·det(g|_{I0⊥}), and the fixed-coset
/// counts against their induced-character expansion.  `corrupt` flips the
/// sign of every dual/expected side.
pub fn complex_check(
    w: &WeylGroup,
    i0: &[usize],
    corrupt: Corruption,
) -> Result<VerificationReport> {
    let n = w.datum.rank;
    let cx = build_subcomplex(w, i0)?;
    let group =
        if cx.i0.is_empty() { w.full_subgroup() } else { w.stabilizer_s_i0(&cx.i0) };
    let cc = chain_complex(w, &cx, &group)?;
    let hom = homology_characters(w, &cc)?;
    let mut report = VerificationReport::new(
        "complex",
        format!(
            "{} {}-lattice base {{{}}} acting order {}",
            w.datum.cartan_type,
            w.datum.lattice_kind,
            set_label(&cx.i0),
            group.order()
        ),
    );

    // The complex is a sphere of dimension n − |I0| − 1: reduced Betti
    // numbers concentrate there.
    let sphere_dim = n - cx.i0.len() - 1;
    let betti = cc.betti();
    for (r, &b) in betti.iter().enumerate() {
        let reduced = if r == 0 { b - 1 } else { b };
        let expected = usize::from(r == sphere_dim);
        report.record(
            format!("reduced Betti in degree {r}"),
            reduced.to_string(),
            expected.to_string(),
            reduced == expected,
        );
    }

    // End characters of the full complex: trivial below, sign on top.  In
    // rank one the ends coincide — H_0 of the two-point sphere is the whole
    // permutation character, trivial plus sign.
    if cx.i0.is_empty() {
        if n == 1 {
            let ends =
                ClassFunction::from_fn(w, &group, |g| int(1) + int(w.sign(g)) * corrupt.rat());
            report.record(
                "homology character in degree 0",
                char_digest(&group, &hom[0]),
                char_digest(&group, &ends),
                hom[0] == ends,
            );
        } else {
            let trivial = ClassFunction::trivial(w, &group);
            report.record(
                "homology character in degree 0",
                char_digest(&group, &hom[0]),
                char_digest(&group, &trivial),
                hom[0] == trivial,
            );
            let top = ClassFunction::from_fn(w, &group, |g| int(w.sign(g)) * corrupt.rat());
            report.record(
                format!("homology character in degree {}", n - 1),
                char_digest(&group, &hom[n - 1]),
                char_digest(&group, &top),
                hom[n - 1] == top,
            );
            for (r, h) in hom.iter().enumerate().take(n - 1).skip(1) {
                report.record(
                    format!("homology character in degree {r}"),
                    char_digest(&group, h),
                    "0",
                    h.is_zero(),
                );
            }
        }
    }

    // Lefschetz numbers three ways, then against the closed form.
    for &g in &group.ids {
        let (chain, hom_tr, fixed) = lefschetz(w, &cx, &cc, &hom, g)?;
        report.record(
            format!("Lefschetz of {}", word_label(w, g)),
            format!("chain={chain} fixed={fixed}"),
            format!("homology={hom_tr}"),
            chain == hom_tr && chain == fixed,
        );
        let det = w.det_on_perp(g, &cx.i0)?;
        let sign = if sphere_dim % 2 == 0 { 1 } else { -1 };
        let closed = int(1) + int(sign * det) * corrupt.rat();
        report.record(
            format!("closed form at {}", word_label(w, g)),
            chain.to_string(),
            closed.to_string(),
            chain == closed,
        );
    }

    // Fixed-coset counts through the double-coset character expansion.
    for i_set in subsets_of(n).into_iter().filter(|i| i.len() < n) {
        for &g in &group.ids {
            let (direct, via) = fixed_coset_count(w, &cx, &group, g, &i_set)?;
            let expected = via * corrupt.rat();
            report.record(
                format!(
                    "cosets of {{{}}} fixed by {}",
                    set_label(&i_set),
                    word_label(w, g)
                ),
                direct.to_string(),
                expected.to_string(),
                int(direct) == expected,
            );
        }
    }
    Ok(report)
}
