//! Based root data (X, R, Y, R∨) for the irreducible crystallographic types
//! of rank at most four, together with the parameter maps λ, λ* that feed the
//! Hecke algebra.
//!
//! A root datum here is a quadruple (X, R, Y, R∨): a lattice X ≅ ℤ^n, its
//! dual Y with the standard pairing ⟨·,·⟩, a finite set R ⊂ X of roots and a
//! bijection α ↦ α∨ onto R∨ ⊂ Y with ⟨α, α∨⟩ = 2.  Two semisimple
//! realizations of each Cartan type are supported:
//!
//! * **root lattice**: X = ℤR with the simple roots as the standard basis, so
//!   the simple coroots are the columns of the Cartan matrix;
//! * **weight lattice**: X = P with the fundamental weights as the standard
//!   basis, so the simple coroots are the standard basis of Y and the simple
//!   roots are the rows of the Cartan matrix.
//!
//! The two realizations bracket the possibilities that matter downstream: the
//! quotient Ω ≅ X/ℤR is trivial in the first and as large as possible in the
//! second, and the condition α∨ ∈ 2Y — which governs when the parameter maps
//! λ and λ* may differ on the orbit of α — holds in the first realization for
//! certain types (e.g. A1, B2) and never on the weight lattice.
//!
//! Only irreducible root systems are constructible: reflections about the
//! highest short root and the group Ω both presuppose irreducibility, and the
//! rank caps keep every downstream enumeration at desk scale.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;

use crate::coefficients::{int, LaurentPoly, ParamSpec, ParamSymbol};
use crate::error::{Error, Result};
use crate::linalg::{hnf_columns, hnf_quotient_reps, imat_inverse, reduce_mod_hnf, IMat, QMat};

/// Marker for an infinite bond order m(s, t) = ∞ in the affine diagram
/// (occurs only for the rank-one affine diagram).
pub const M_INFINITY: usize = usize::MAX;

/// The simple-laced and multiply-laced families in scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

/// An irreducible Cartan type of desk-scale rank: A1–A4, B2–B4, C2–C4,
/// D3–D4, G2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => (1..=4).contains(&rank),
            Family::B | Family::C => (2..=4).contains(&rank),
            Family::D => (3..=4).contains(&rank),
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::UnsupportedType(format!(
                "type {:?}{} is not in the supported catalog (A1-A4, B2-B4, C2-C4, D3-D4, G2)",
                family, rank
            )));
        }
        Ok(CartanType { family, rank })
    }

    /// Cartan matrix c[i][j] = ⟨α_i, α_j∨⟩ in the Bourbaki numbering
    /// (for B the last simple root is short, for C it is long, for G2 the
    /// first is short).
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        let chain = |c: &mut Vec<Vec<i64>>, upto: usize| {
            for i in 0..upto {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        };
        match self.family {
            Family::A => chain(&mut c, n - 1),
            Family::B => {
                chain(&mut c, n - 1);
                c[n - 2][n - 1] = -2;
            }
            Family::C => {
                chain(&mut c, n - 1);
                c[n - 1][n - 2] = -2;
            }
            Family::D => {
                chain(&mut c, n - 2);
                c[n - 3][n - 1] = -1;
                c[n - 1][n - 3] = -1;
            }
            Family::G => {
                c[0][1] = -1;
                c[1][0] = -3;
            }
        }
        c
    }

    /// |W| for the finite Weyl group of this type.
    pub fn weyl_order(&self) -> usize {
        let n = self.rank;
        let fact = |k: usize| (1..=k).product::<usize>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1 << n) * fact(n),
            Family::D => (1 << (n - 1)) * fact(n),
            Family::G => 12,
        }
    }

    /// |R|, the number of roots.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1),
            Family::B | Family::C => 2 * n * n,
            Family::D => 2 * n * (n - 1),
            Family::G => 12,
        }
    }

    /// Index of the root lattice in the weight lattice, i.e. det of the
    /// Cartan matrix.
    pub fn lattice_index(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B | Family::C => 2,
            Family::D => 4,
            Family::G => 1,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('G') => Family::G,
            _ => {
                return Err(Error::UnsupportedType(format!(
                    "cannot parse Cartan type from {s:?}"
                )))
            }
        };
        let rest: String = chars.collect();
        let rank: usize = rest
            .parse()
            .map_err(|_| Error::UnsupportedType(format!("cannot parse rank from {s:?}")))?;
        CartanType::new(fam, rank)
    }
}

/// Which standard realization of the lattice X was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeKind {
    /// X = ℤR (adjoint realization): Ω is trivial.
    Root,
    /// X = P, the full weight lattice (simply connected dual side): Ω ≅ P/ℤR.
    Weight,
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeKind::Root => write!(f, "root"),
            LatticeKind::Weight => write!(f, "weight"),
        }
    }
}

impl FromStr for LatticeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "root" | "root-lattice" | "adjoint" => Ok(LatticeKind::Root),
            "weight" | "weight-lattice" | "simply-connected" => Ok(LatticeKind::Weight),
            other => Err(Error::UnsupportedType(format!(
                "unknown lattice kind {other:?} (expected \"root\" or \"weight\")"
            ))),
        }
    }
}

/// One root with its coroot and both coefficient vectors: `vec` lives in X,
/// `covec` in Y, `root_coeffs` expresses the root in the simple roots and
/// `coroot_coeffs` the coroot in the simple coroots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub vec: Vec<i64>,
    pub covec: Vec<i64>,
    pub root_coeffs: Vec<i64>,
    pub coroot_coeffs: Vec<i64>,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.root_coeffs.iter().all(|&c| c >= 0)
    }

    pub fn height(&self) -> i64 {
        self.root_coeffs.iter().sum()
    }
}

/// A length-zero element γ of the extended affine Weyl group, recorded as the
/// affine transformation v ↦ mat·v + affine_trans of X ⊗ ℝ together with the
/// permutation it induces on the walls of the fundamental alcove.
#[derive(Debug, Clone)]
pub struct OmegaElem {
    /// Linear part u ∈ W.
    pub mat: IMat,
    /// Affine translation x: the action is v ↦ u(v) + x.
    pub affine_trans: Vec<i64>,
    /// Permutation of the affine nodes 0..=rank (node `rank` is s0) induced
    /// by conjugation.
    pub node_perm: Vec<usize>,
    /// Canonical representative of the coset of X/ℤR this element realizes.
    pub coset_rep: Vec<i64>,
}

impl OmegaElem {
    /// The same element written as w·t_μ (apply the translation by μ first,
    /// then w): returns (w, μ) with μ = w^{-1}(x).
    pub fn as_w_t(&self) -> (IMat, Vec<i64>) {
        let w_inv = imat_inverse(&self.mat);
        (self.mat.clone(), w_inv.apply(&self.affine_trans))
    }
}

/// A based root datum in one of the two standard realizations, with every
/// derived structure the rest of the crate needs precomputed: the full root
/// list (positive roots first, sorted by height), root orbits under W, the
/// highest short root / highest coroot, 2ρ, and the group Ω with its action
/// on the affine diagram.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub cartan_type: CartanType,
    pub lattice_kind: LatticeKind,
    pub rank: usize,
    /// c[i][j] = ⟨α_i, α_j∨⟩.
    pub cartan: Vec<Vec<i64>>,
    /// Gram matrix of the pairing on the chosen bases of X and Y (the dual
    /// basis is always used for Y, so this is the identity).
    pub pairing: Vec<Vec<i64>>,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    /// All roots; indices `0..n_positive` are the positive ones sorted by
    /// (height, lex), and `neg_of[i] = i + n_positive` for positive i.
    pub roots: Vec<Root>,
    pub n_positive: usize,
    pub neg_of: Vec<usize>,
    /// W-orbit id of each root (orbits are numbered by first appearance).
    pub orbit_of: Vec<usize>,
    pub n_orbits: usize,
    /// For each orbit, the index of a simple root in it.
    pub orbit_simple_rep: Vec<usize>,
    /// Root index of the highest short root α0; its covec is the highest
    /// coroot.
    pub highest_short: usize,
    /// Sum of the positive roots (twice the Weyl vector), a strictly dominant
    /// element of ℤR ⊆ X with ⟨2ρ, α_i∨⟩ = 2 for all i.
    pub two_rho: Vec<i64>,
    /// The length-zero subgroup Ω ≅ X/ℤR of the extended affine Weyl group.
    pub omega: Vec<OmegaElem>,
    root_index: BTreeMap<Vec<i64>, usize>,
    hnf_root_lattice: Vec<Vec<i64>>,
}

/// Construct the root datum for the given type and realization, enumerating
/// R by reflection closure of the simple roots and verifying the axioms
/// (⟨α, α∨⟩ = 2, each reflection permutes R, R = R⁺ ⊔ −R⁺, the root count
/// matches the type).
pub fn build_root_datum(
    family: Family,
    rank: usize,
    lattice_kind: LatticeKind,
) -> Result<RootDatum> {
    let cartan_type = CartanType::new(family, rank)?;
    let cartan = cartan_type.cartan_matrix();
    let n = rank;

    let (simple_roots, simple_coroots): (Vec<Vec<i64>>, Vec<Vec<i64>>) = match lattice_kind {
        LatticeKind::Root => {
            let roots: Vec<Vec<i64>> =
                (0..n).map(|i| (0..n).map(|r| i64::from(r == i)).collect()).collect();
            let coroots: Vec<Vec<i64>> =
                (0..n).map(|j| (0..n).map(|r| cartan[r][j]).collect()).collect();
            (roots, coroots)
        }
        LatticeKind::Weight => {
            let roots: Vec<Vec<i64>> = (0..n).map(|i| cartan[i].clone()).collect();
            let coroots: Vec<Vec<i64>> =
                (0..n).map(|j| (0..n).map(|r| i64::from(r == j)).collect()).collect();
            (roots, coroots)
        }
    };

    // Reflection closure of the simple roots, carrying coroots and both
    // coefficient vectors along: s_i(β) = β − ⟨β, α_i∨⟩ α_i and
    // s_i(β∨) = β∨ − ⟨α_i, β∨⟩ α_i∨.
    let dot = |x: &[i64], y: &[i64]| -> i64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };
    let mut all: Vec<Root> = Vec::new();
    let mut seen: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for i in 0..n {
        let mut root_coeffs = vec![0i64; n];
        root_coeffs[i] = 1;
        let r = Root {
            vec: simple_roots[i].clone(),
            covec: simple_coroots[i].clone(),
            root_coeffs,
            coroot_coeffs: {
                let mut c = vec![0i64; n];
                c[i] = 1;
                c
            },
        };
        seen.insert(r.vec.clone(), all.len());
        all.push(r);
    }
    let mut frontier: Vec<usize> = (0..all.len()).collect();
    while let Some(idx) = frontier.pop() {
        for i in 0..n {
            let base = all[idx].clone();
            let p = dot(&base.vec, &simple_coroots[i]);
            let p2 = dot(&simple_roots[i], &base.covec);
            let mut vec = base.vec.clone();
            let mut covec = base.covec.clone();
            let mut rc = base.root_coeffs.clone();
            let mut cc = base.coroot_coeffs.clone();
            for r in 0..n {
                vec[r] -= p * simple_roots[i][r];
                covec[r] -= p2 * simple_coroots[i][r];
            }
            rc[i] -= p;
            cc[i] -= p2;
            if !seen.contains_key(&vec) {
                seen.insert(vec.clone(), all.len());
                frontier.push(all.len());
                all.push(Root { vec, covec, root_coeffs: rc, coroot_coeffs: cc });
            }
        }
    }

    if all.len() != cartan_type.root_count() {
        return Err(Error::UnsupportedType(format!(
            "root enumeration for {cartan_type} produced {} roots, expected {}",
            all.len(),
            cartan_type.root_count()
        )));
    }

    // Order: positive roots by (height, lex), then the negatives mirrored.
    let mut positives: Vec<Root> = all.iter().filter(|r| r.is_positive()).cloned().collect();
    positives.sort_by_key(|r| (r.height(), r.vec.clone()));
    let n_positive = positives.len();
    assert_eq!(2 * n_positive, all.len(), "roots must split evenly into R+ and -R+");
    let mut roots = positives.clone();
    for r in &positives {
        roots.push(Root {
            vec: r.vec.iter().map(|v| -v).collect(),
            covec: r.covec.iter().map(|v| -v).collect(),
            root_coeffs: r.root_coeffs.iter().map(|v| -v).collect(),
            coroot_coeffs: r.coroot_coeffs.iter().map(|v| -v).collect(),
        });
    }
    let root_index: BTreeMap<Vec<i64>, usize> =
        roots.iter().enumerate().map(|(i, r)| (r.vec.clone(), i)).collect();
    assert_eq!(root_index.len(), roots.len());
    let neg_of: Vec<usize> = roots
        .iter()
        .map(|r| root_index[&r.vec.iter().map(|v| -v).collect::<Vec<i64>>()])
        .collect();

    for r in &roots {
        assert_eq!(dot(&r.vec, &r.covec), 2, "⟨α, α∨⟩ = 2 must hold for every root");
    }
    // Every root reflection (not only the simple ones) must permute R.
    for s in 0..roots.len() {
        for r in 0..roots.len() {
            let p = dot(&roots[r].vec, &roots[s].covec);
            let image: Vec<i64> = (0..n).map(|k| roots[r].vec[k] - p * roots[s].vec[k]).collect();
            if !root_index.contains_key(&image) {
                return Err(Error::UnsupportedType(format!(
                    "reflection closure failed for {cartan_type}: s_β(α) escaped R"
                )));
            }
        }
    }

    // W-orbits of roots via the simple reflections.
    let mut orbit_of = vec![usize::MAX; roots.len()];
    let mut n_orbits = 0;
    for start in 0..roots.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        orbit_of[start] = n_orbits;
        while let Some(idx) = stack.pop() {
            for i in 0..n {
                let p = dot(&roots[idx].vec, &simple_coroots[i]);
                let image: Vec<i64> =
                    (0..n).map(|k| roots[idx].vec[k] - p * simple_roots[i][k]).collect();
                let j = root_index[&image];
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = n_orbits;
                    stack.push(j);
                }
            }
        }
        n_orbits += 1;
    }
    let mut orbit_simple_rep = vec![usize::MAX; n_orbits];
    for i in 0..n {
        let idx = root_index[&simple_roots[i]];
        let o = orbit_of[idx];
        if orbit_simple_rep[o] == usize::MAX {
            orbit_simple_rep[o] = i;
        }
    }
    assert!(
        orbit_simple_rep.iter().all(|&r| r != usize::MAX),
        "every root orbit contains a simple root"
    );

    // Highest coroot: the unique positive coroot dominating all others in
    // the coefficient order on simple coroots.
    let mut highest_short = 0;
    for i in 0..n_positive {
        if roots[i].coroot_coeffs.iter().sum::<i64>()
            > roots[highest_short].coroot_coeffs.iter().sum::<i64>()
        {
            highest_short = i;
        }
    }
    for i in 0..n_positive {
        assert!(
            roots[highest_short]
                .coroot_coeffs
                .iter()
                .zip(&roots[i].coroot_coeffs)
                .all(|(a, b)| a >= b),
            "highest coroot must dominate every positive coroot"
        );
    }

    let mut two_rho = vec![0i64; n];
    for r in roots.iter().take(n_positive) {
        for k in 0..n {
            two_rho[k] += r.vec[k];
        }
    }

    let hnf_root_lattice = hnf_columns(&simple_roots);

    let mut datum = RootDatum {
        cartan_type,
        lattice_kind,
        rank,
        cartan,
        pairing: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        simple_roots,
        simple_coroots,
        roots,
        n_positive,
        neg_of,
        orbit_of,
        n_orbits,
        orbit_simple_rep,
        highest_short,
        two_rho,
        omega: Vec::new(),
        root_index,
        hnf_root_lattice,
    };
    datum.omega = datum.compute_omega();
    Ok(datum)
}

impl RootDatum {
    /// ⟨x, y⟩ for x ∈ X, y ∈ Y in the chosen bases.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    pub fn index_of_root(&self, vec: &[i64]) -> Option<usize> {
        self.root_index.get(vec).copied()
    }

    pub fn is_positive_root_index(&self, idx: usize) -> bool {
        idx < self.n_positive
    }

    /// s_α(x) = x − ⟨x, α∨⟩ α for a root given by its vector in X.
    pub fn reflect(&self, alpha: &[i64], x: &[i64]) -> Result<Vec<i64>> {
        let idx = self.index_of_root(alpha).ok_or(Error::NotARoot)?;
        Ok(self.reflect_by_index(idx, x))
    }

    pub fn reflect_by_index(&self, root_idx: usize, x: &[i64]) -> Vec<i64> {
        let r = &self.roots[root_idx];
        let p = self.pair(x, &r.covec);
        x.iter().zip(&r.vec).map(|(xi, ai)| xi - p * ai).collect()
    }

    /// Coreflection on Y: s_α(y) = y − ⟨α, y⟩ α∨.
    pub fn coreflect_by_index(&self, root_idx: usize, y: &[i64]) -> Vec<i64> {
        let r = &self.roots[root_idx];
        let p = self.pair(&r.vec, y);
        y.iter().zip(&r.covec).map(|(yi, ci)| yi - p * ci).collect()
    }

    /// Matrix of s_α on X (row-major).
    pub fn reflection_matrix(&self, root_idx: usize) -> IMat {
        let n = self.rank;
        let r = &self.roots[root_idx];
        let mut data = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = i64::from(i == j) - r.covec[j] * r.vec[i];
            }
        }
        IMat { n, data }
    }

    /// Matrix of s_α on Y (row-major).
    pub fn coreflection_matrix(&self, root_idx: usize) -> IMat {
        let n = self.rank;
        let r = &self.roots[root_idx];
        let mut data = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = i64::from(i == j) - r.vec[j] * r.covec[i];
            }
        }
        IMat { n, data }
    }

    /// Root index of the i-th simple root.
    pub fn simple_root_index(&self, i: usize) -> usize {
        self.root_index[&self.simple_roots[i]]
    }

    /// The record of the highest short root α0; `covec` is the highest
    /// coroot, the unique maximal element of (R∨)⁺ in dominance order.
    pub fn highest_coroot(&self) -> &Root {
        &self.roots[self.highest_short]
    }

    /// Does the W-orbit `o` of roots satisfy α∨ ∈ 2Y?  (The property is
    /// orbit-invariant because W acts on Y by integer matrices.)
    pub fn orbit_coroot_in_2y(&self, o: usize) -> bool {
        let rep = self.simple_root_index(self.orbit_simple_rep[o]);
        self.roots[rep].covec.iter().all(|c| c % 2 == 0)
    }

    pub fn simple_orbit(&self, i: usize) -> usize {
        self.orbit_of[self.simple_root_index(i)]
    }

    pub fn is_dominant(&self, x: &[i64]) -> bool {
        (0..self.rank).all(|i| self.pair(x, &self.simple_coroots[i]) >= 0)
    }

    /// Smallest k ≥ 0 such that x + k·2ρ is dominant.
    pub fn dominant_shift_steps(&self, x: &[i64]) -> i64 {
        let mut k = 0i64;
        for i in 0..self.rank {
            let p = self.pair(x, &self.simple_coroots[i]);
            if p < 0 {
                k = k.max((-p + 1) / 2);
            }
        }
        k
    }

    /// Fundamental weights ω_i as rows of a rational matrix: ⟨ω_i, α_j∨⟩ =
    /// δ_ij.  These span the vertices ω_i / c_i of the fundamental alcove,
    /// where c_i is the coefficient of α_i∨ in the highest coroot.
    pub fn fundamental_weights(&self) -> QMat {
        let n = self.rank;
        let m = QMat::from_fn(n, n, |r, j| int(self.simple_coroots[j][r]));
        m.inverse().expect("simple coroots span Y ⊗ Q")
    }

    /// Barycenter of the fundamental (dominant) alcove A, whose vertices are
    /// 0 and ω_i / c_i.
    pub fn alcove_barycenter(&self) -> Vec<BigRational> {
        let n = self.rank;
        let fw = self.fundamental_weights();
        let c = &self.highest_coroot().coroot_coeffs;
        let denom = int(n as i64 + 1);
        (0..n)
            .map(|r| {
                let mut acc = BigRational::zero();
                for i in 0..n {
                    acc += &fw[(i, r)] / int(c[i]);
                }
                acc / &denom
            })
            .collect()
    }

    /// W-invariant symmetric form B(x, y) = Σ_{β∨ ∈ R∨} ⟨x, β∨⟩⟨y, β∨⟩ as a
    /// Gram matrix on X.
    pub fn invariant_form(&self) -> QMat {
        let n = self.rank;
        QMat::from_fn(n, n, |i, j| {
            let mut acc = 0i64;
            for r in &self.roots {
                acc += r.covec[i] * r.covec[j];
            }
            int(acc)
        })
    }

    /// Canonical representatives of X/ℤR (the zero vector first).
    pub fn lattice_quotient_reps(&self) -> Vec<Vec<i64>> {
        let mut reps = hnf_quotient_reps(&self.hnf_root_lattice);
        reps.sort();
        reps
    }

    pub fn reduce_mod_root_lattice(&self, v: &[i64]) -> Vec<i64> {
        reduce_mod_hnf(&self.hnf_root_lattice, v)
    }

    /// Finite bond order m(s_i, s_j) read off the Cartan matrix.
    pub fn m_finite(&self, i: usize, j: usize) -> usize {
        if i == j {
            return 1;
        }
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            p => panic!("impossible Cartan product {p}"),
        }
    }

    /// Bond order in the affine diagram on nodes 0..=rank, where node `rank`
    /// is s0 (the reflection attached to the highest coroot); M_INFINITY
    /// encodes the infinite bond of the rank-one affine diagram.
    pub fn m_affine(&self, i: usize, j: usize) -> usize {
        let n = self.rank;
        if i == j {
            return 1;
        }
        if i < n && j < n {
            return self.m_finite(i, j);
        }
        let k = if i < n { i } else { j };
        let a0 = self.highest_coroot();
        let p = self.pair(&a0.vec, &self.simple_coroots[k])
            * self.pair(&self.simple_roots[k], &a0.covec);
        match p {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            4 => M_INFINITY,
            _ => panic!("impossible affine Cartan product {p}"),
        }
    }

    /// All elements of W as matrices on X, by closure from the simple
    /// reflections (desk scale: at most 384 elements in the catalog).
    fn enumerate_w_matrices(&self) -> Vec<IMat> {
        let gens: Vec<IMat> =
            (0..self.rank).map(|i| self.reflection_matrix(self.simple_root_index(i))).collect();
        let mut seen = std::collections::BTreeSet::new();
        let id = IMat::identity(self.rank);
        seen.insert(id.clone());
        let mut frontier = vec![id];
        let mut all = Vec::new();
        while let Some(w) = frontier.pop() {
            all.push(w.clone());
            for g in &gens {
                let next = g.mul(&w);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        all
    }

    /// The group Ω = {γ ∈ W ⋉ X : γ(A) = A} ≅ X/ℤR: for each u ∈ W the
    /// translation x = b − u(b) (b the alcove barycenter) is integral for
    /// exactly one u per coset of X/ℤR.
    fn compute_omega(&self) -> Vec<OmegaElem> {
        let n = self.rank;
        let b = self.alcove_barycenter();
        let reps = self.lattice_quotient_reps();
        let expected = match self.lattice_kind {
            LatticeKind::Root => 1,
            LatticeKind::Weight => self.cartan_type.lattice_index(),
        };
        assert_eq!(reps.len(), expected, "|X/ZR| must match the lattice index");

        // Affine node reflections r_j as integer affine maps (A, t): v ↦ Av + t.
        let mut node_maps: Vec<(IMat, Vec<i64>)> = (0..n)
            .map(|i| (self.reflection_matrix(self.simple_root_index(i)), vec![0i64; n]))
            .collect();
        let s0_mat = self.reflection_matrix(self.highest_short);
        node_maps.push((s0_mat, self.highest_coroot().vec.clone()));

        let mut found: BTreeMap<Vec<i64>, OmegaElem> = BTreeMap::new();
        for u in self.enumerate_w_matrices() {
            let ub = u.apply_rat(&b);
            let x: Option<Vec<i64>> = b
                .iter()
                .zip(&ub)
                .map(|(bi, ui)| {
                    use num_traits::ToPrimitive;
                    let d = bi - ui;
                    d.is_integer().then(|| d.to_integer().to_i64().expect("fits i64"))
                })
                .collect();
            let Some(x) = x else { continue };
            let coset = self.reduce_mod_root_lattice(&x);
            if found.contains_key(&coset) {
                continue;
            }
            // Node permutation: γ r_j γ^{-1} must be another node reflection.
            let u_inv = imat_inverse(&u);
            let mut node_perm = Vec::with_capacity(n + 1);
            for (a, t) in &node_maps {
                let lin = u.mul(a).mul(&u_inv);
                let mut tr = u.apply(t);
                let lx = lin.apply(&x);
                for r in 0..n {
                    tr[r] += x[r] - lx[r];
                }
                let pos = node_maps
                    .iter()
                    .position(|(a2, t2)| *a2 == lin && *t2 == tr)
                    .expect("Ω must permute the walls of the fundamental alcove");
                node_perm.push(pos);
            }
            found.insert(
                coset.clone(),
                OmegaElem { mat: u, affine_trans: x, node_perm, coset_rep: coset },
            );
        }
        assert_eq!(found.len(), expected, "each coset of X/ZR is realized by exactly one γ");
        found.into_values().collect()
    }
}

/// The parameter maps λ, λ*: nonnegative integers attached to the W-orbits
/// of roots, equal on each orbit, with λ*(α) = λ(α) required whenever
/// α∨ ∉ 2Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamAssignment {
    /// λ value per root orbit.
    pub lambda: Vec<u32>,
    /// λ* value per root orbit.
    pub lambda_star: Vec<u32>,
}

impl ParamAssignment {
    /// Build from per-simple-root value lists (the natural file format),
    /// validating orbit constancy and the 2Y constraint.
    pub fn from_simple_values(
        datum: &RootDatum,
        lambda: &[u32],
        lambda_star: Option<&[u32]>,
    ) -> Result<Self> {
        let n = datum.rank;
        if lambda.len() != n {
            return Err(Error::InconsistentParameters(format!(
                "expected {n} lambda values (one per simple root), got {}",
                lambda.len()
            )));
        }
        let star = match lambda_star {
            Some(s) => {
                if s.len() != n {
                    return Err(Error::InconsistentParameters(format!(
                        "expected {n} lambda_star values, got {}",
                        s.len()
                    )));
                }
                s.to_vec()
            }
            None => lambda.to_vec(),
        };
        let mut per_orbit_l = vec![None; datum.n_orbits];
        let mut per_orbit_s = vec![None; datum.n_orbits];
        for i in 0..n {
            let o = datum.simple_orbit(i);
            for (slot, value) in [(&mut per_orbit_l[o], lambda[i]), (&mut per_orbit_s[o], star[i])]
            {
                match slot {
                    None => *slot = Some(value),
                    Some(prev) if *prev == value => {}
                    Some(prev) => {
                        return Err(Error::InconsistentParameters(format!(
                            "simple root {i} is W-conjugate to an earlier one but carries \
                             a different parameter ({value} vs {prev})"
                        )))
                    }
                }
            }
        }
        let lambda_orb: Vec<u32> = per_orbit_l.into_iter().map(|v| v.unwrap()).collect();
        let star_orb: Vec<u32> = per_orbit_s.into_iter().map(|v| v.unwrap()).collect();
        for o in 0..datum.n_orbits {
            if lambda_orb[o] != star_orb[o] && !datum.orbit_coroot_in_2y(o) {
                return Err(Error::InconsistentParameters(format!(
                    "orbit of simple root {} has α∨ ∉ 2Y, so λ* must equal λ \
                     (got λ={}, λ*={})",
                    datum.orbit_simple_rep[o], lambda_orb[o], star_orb[o]
                )));
            }
        }
        Ok(ParamAssignment { lambda: lambda_orb, lambda_star: star_orb })
    }

    pub fn equal_parameters(datum: &RootDatum) -> Self {
        ParamAssignment {
            lambda: vec![1; datum.n_orbits],
            lambda_star: vec![1; datum.n_orbits],
        }
    }
}

/// The resolved formal parameters of the affine Hecke algebra: one parameter
/// slot per root orbit for λ, plus an extra slot per orbit where λ* ≠ λ.
/// Each slot with positive value owns one formal variable q_i (with a formal
/// square root v_i); slots with value 0 degenerate to the constant 1.
#[derive(Debug, Clone)]
pub struct AffineParams {
    pub rank: usize,
    /// Number of formal variables (slots with positive λ value).
    pub nvars: usize,
    pub lambda_slot_of_orbit: Vec<usize>,
    pub star_slot_of_orbit: Vec<usize>,
    /// Slot of each affine generator: nodes 0..rank are the finite simple
    /// reflections, node `rank` is s0 with parameter q^{λ*(α0)}.
    pub slot_of_gen: Vec<usize>,
    pub lambda_of_slot: Vec<u32>,
    pub var_of_slot: Vec<Option<ParamSymbol>>,
}

/// Compute the parameter symbols of S_aff from a parameter assignment:
/// q_{s_i} = q^{λ(α_i)} for the finite generators, q_{s0} = q^{λ*(α0)}, with
/// one formal variable per distinct parameter slot.  Generators conjugate in
/// the extended affine Weyl group (odd bonds in the affine diagram, or the
/// Ω-action on nodes) must land in the same slot.
pub fn affine_parameters(datum: &RootDatum, assignment: &ParamAssignment) -> Result<AffineParams> {
    let n = datum.rank;
    if assignment.lambda.len() != datum.n_orbits || assignment.lambda_star.len() != datum.n_orbits
    {
        return Err(Error::InconsistentParameters(
            "parameter assignment does not match the root orbit count".into(),
        ));
    }
    // Slots: λ slot per orbit, then a λ* slot for orbits where they differ.
    let lambda_slot_of_orbit: Vec<usize> = (0..datum.n_orbits).collect();
    let mut lambda_of_slot: Vec<u32> = assignment.lambda.clone();
    let mut star_slot_of_orbit = lambda_slot_of_orbit.clone();
    for o in 0..datum.n_orbits {
        if assignment.lambda_star[o] != assignment.lambda[o] {
            star_slot_of_orbit[o] = lambda_of_slot.len();
            lambda_of_slot.push(assignment.lambda_star[o]);
        }
    }
    let alpha0_orbit = datum.orbit_of[datum.highest_short];
    let mut slot_of_gen: Vec<usize> =
        (0..n).map(|i| lambda_slot_of_orbit[datum.simple_orbit(i)]).collect();
    slot_of_gen.push(star_slot_of_orbit[alpha0_orbit]);

    // Conjugacy of affine generators: union by odd bonds and by the Ω action.
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    };
    for i in 0..=n {
        for j in (i + 1)..=n {
            let m = datum.m_affine(i, j);
            if m != M_INFINITY && m % 2 == 1 {
                union(&mut parent, i, j);
            }
        }
        for g in &datum.omega {
            union(&mut parent, i, g.node_perm[i]);
        }
    }
    for i in 0..=n {
        for j in (i + 1)..=n {
            if find(&mut parent, i) == find(&mut parent, j) && slot_of_gen[i] != slot_of_gen[j] {
                return Err(Error::InconsistentParameters(format!(
                    "affine generators {i} and {j} are conjugate but carry different \
                     parameters ({} vs {})",
                    lambda_of_slot[slot_of_gen[i]], lambda_of_slot[slot_of_gen[j]]
                )));
            }
        }
    }

    let mut nvars = 0;
    let var_of_slot: Vec<Option<ParamSymbol>> = lambda_of_slot
        .iter()
        .map(|&l| {
            if l > 0 {
                let s = ParamSymbol(nvars);
                nvars += 1;
                Some(s)
            } else {
                None
            }
        })
        .collect();

    Ok(AffineParams {
        rank: n,
        nvars,
        lambda_slot_of_orbit,
        star_slot_of_orbit,
        slot_of_gen,
        lambda_of_slot,
        var_of_slot,
    })
}

impl AffineParams {
    fn q_of_slot(&self, slot: usize) -> LaurentPoly {
        match self.var_of_slot[slot] {
            Some(s) => LaurentPoly::q(self.nvars, s),
            None => LaurentPoly::one(self.nvars),
        }
    }

    fn v_of_slot(&self, slot: usize) -> LaurentPoly {
        match self.var_of_slot[slot] {
            Some(s) => LaurentPoly::v(self.nvars, s),
            None => LaurentPoly::one(self.nvars),
        }
    }

    /// Quadratic parameter q_s of an affine generator (node `rank` is s0).
    pub fn q_of_gen(&self, node: usize) -> LaurentPoly {
        self.q_of_slot(self.slot_of_gen[node])
    }

    /// Formal square root v_s = q_s^{1/2}.
    pub fn v_of_gen(&self, node: usize) -> LaurentPoly {
        self.v_of_slot(self.slot_of_gen[node])
    }

    /// q^{λ(α)} for the orbit of α.
    pub fn q_of_orbit(&self, orbit: usize) -> LaurentPoly {
        self.q_of_slot(self.lambda_slot_of_orbit[orbit])
    }

    pub fn v_of_orbit(&self, orbit: usize) -> LaurentPoly {
        self.v_of_slot(self.lambda_slot_of_orbit[orbit])
    }

    /// q^{λ*(α)} for the orbit of α.
    pub fn q_star_of_orbit(&self, orbit: usize) -> LaurentPoly {
        self.q_of_slot(self.star_slot_of_orbit[orbit])
    }

    pub fn v_star_of_orbit(&self, orbit: usize) -> LaurentPoly {
        self.v_of_slot(self.star_slot_of_orbit[orbit])
    }

    /// Whether λ*(α) = λ(α) on this orbit (they share a parameter slot).
    pub fn star_equals_lambda(&self, orbit: usize) -> bool {
        self.star_slot_of_orbit[orbit] == self.lambda_slot_of_orbit[orbit]
    }

    /// Specialize every variable to base^{λ of its slot} (the equal-parameter
    /// specialization when λ ≡ 1).
    pub fn default_spec(&self, base: &BigRational) -> Result<ParamSpec> {
        let mut values = Vec::with_capacity(self.nvars);
        for (slot, var) in self.var_of_slot.iter().enumerate() {
            if var.is_some() {
                let mut v = BigRational::from_integer(1.into());
                for _ in 0..self.lambda_of_slot[slot] {
                    v *= base;
                }
                values.push(v);
            }
        }
        ParamSpec::from_q_values(&values)
    }

    /// Specialize from explicit per-variable q values (in variable order).
    pub fn spec_from_values(&self, values: &[BigRational]) -> Result<ParamSpec> {
        if values.len() != self.nvars {
            return Err(Error::IllegalParameter(format!(
                "expected {} parameter values, got {}",
                self.nvars,
                values.len()
            )));
        }
        ParamSpec::from_q_values(values)
    }
}

/// On-disk root-datum description (JSON): cartan_type ("B2" or "B" plus a
/// rank field), lattice_kind ("root" | "weight"), and optional lambda /
/// lambda_star values, either uniform or one per simple root.
#[derive(Debug, Deserialize)]
struct DatumFile {
    cartan_type: String,
    #[serde(default)]
    rank: Option<usize>,
    lattice_kind: String,
    #[serde(default)]
    lambda: Option<LambdaField>,
    #[serde(default)]
    lambda_star: Option<LambdaField>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum LambdaField {
    Uniform(u32),
    PerSimple(Vec<u32>),
}

impl LambdaField {
    fn per_simple(&self, rank: usize) -> Vec<u32> {
        match self {
            LambdaField::Uniform(v) => vec![*v; rank],
            LambdaField::PerSimple(vs) => vs.clone(),
        }
    }
}

/// Parse a root-datum file into the datum and its parameter assignment.
pub fn parse_datum_file(text: &str) -> Result<(RootDatum, ParamAssignment)> {
    let file: DatumFile = serde_json::from_str(text)
        .map_err(|e| Error::Io(format!("malformed root-datum file: {e}")))?;
    let tyre = file.cartan_type.trim();
    let cartan_type = if tyre.len() > 1 && tyre[1..].chars().all(|c| c.is_ascii_digit()) {
        let t: CartanType = tyre.parse()?;
        if let Some(r) = file.rank {
            if r != t.rank {
                return Err(Error::UnsupportedType(format!(
                    "rank field {r} contradicts cartan_type {tyre:?}"
                )));
            }
        }
        t
    } else {
        let rank = file.rank.ok_or_else(|| {
            Error::UnsupportedType(format!(
                "cartan_type {tyre:?} carries no rank and no rank field was given"
            ))
        })?;
        format!("{tyre}{rank}").parse()?
    };
    let lattice: LatticeKind = file.lattice_kind.parse()?;
    let datum = build_root_datum(cartan_type.family, cartan_type.rank, lattice)?;
    let lambda = file
        .lambda
        .map(|f| f.per_simple(datum.rank))
        .unwrap_or_else(|| vec![1; datum.rank]);
    let star = file.lambda_star.map(|f| f.per_simple(datum.rank));
    let assignment = ParamAssignment::from_simple_values(&datum, &lambda, star.as_deref())?;
    Ok((datum, assignment))
}

/// All supported (type, rank) pairs, for exhaustive tests and the CLI.
pub fn supported_types() -> Vec<CartanType> {
    let mut out = Vec::new();
    for rank in 1..=4 {
        out.push(CartanType::new(Family::A, rank).unwrap());
    }
    for rank in 2..=4 {
        out.push(CartanType::new(Family::B, rank).unwrap());
        out.push(CartanType::new(Family::C, rank).unwrap());
    }
    for rank in 3..=4 {
        out.push(CartanType::new(Family::D, rank).unwrap());
    }
    out.push(CartanType::new(Family::G, 2).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use num_traits::One;

    fn both_lattices() -> Vec<LatticeKind> {
        vec![LatticeKind::Root, LatticeKind::Weight]
    }

    #[test]
    fn catalog_counts_and_axioms() {
        for t in supported_types() {
            for lk in both_lattices() {
                let d = build_root_datum(t.family, t.rank, lk).unwrap();
                assert_eq!(d.roots.len(), t.root_count(), "{t}");
                assert_eq!(2 * d.n_positive, d.roots.len(), "{t}");
                for i in 0..d.rank {
                    assert_eq!(
                        d.pair(&d.simple_roots[i], &d.simple_coroots[i]),
                        2,
                        "{t}: ⟨α, α∨⟩ = 2"
                    );
                    for j in 0..d.rank {
                        assert_eq!(
                            d.pair(&d.simple_roots[i], &d.simple_coroots[j]),
                            d.cartan[i][j],
                            "{t}: pairing of simples must reproduce the Cartan matrix"
                        );
                    }
                }
                // 2ρ pairs to 2 against every simple coroot.
                for i in 0..d.rank {
                    assert_eq!(d.pair(&d.two_rho, &d.simple_coroots[i]), 2, "{t}");
                }
                // Fundamental weights are dual to the simple coroots.
                let fw = d.fundamental_weights();
                for i in 0..d.rank {
                    for j in 0..d.rank {
                        let mut acc = num_rational::BigRational::zero();
                        for r in 0..d.rank {
                            acc += &fw[(i, r)] * int(d.simple_coroots[j][r]);
                        }
                        assert_eq!(acc, if i == j { int(1) } else { int(0) });
                    }
                }
                // The invariant form really is W-invariant.
                let b = d.invariant_form();
                for i in 0..d.rank {
                    let s = d.reflection_matrix(d.simple_root_index(i)).to_qmat();
                    assert_eq!(s.transpose().mul(&b).mul(&s), b, "{t}: StBS = B");
                }
                // Ω has the expected order and permutes the affine nodes.
                let expected = match lk {
                    LatticeKind::Root => 1,
                    LatticeKind::Weight => t.lattice_index(),
                };
                assert_eq!(d.omega.len(), expected, "{t} {lk}");
                for g in &d.omega {
                    let mut sorted = g.node_perm.clone();
                    sorted.sort();
                    assert_eq!(sorted, (0..=d.rank).collect::<Vec<_>>());
                }
                // Equal parameters are always consistent, whatever the
                // conjugation pattern of the affine generators.
                let ap =
                    affine_parameters(&d, &ParamAssignment::equal_parameters(&d)).unwrap();
                assert!(ap.nvars >= 1 && ap.nvars <= d.n_orbits);
            }
        }
    }

    #[test]
    fn reflection_formula_in_rank_two() {
        let d = build_root_datum(Family::A, 2, LatticeKind::Root).unwrap();
        // s_{α1}(α2) = α1 + α2.
        let image = d.reflect(&d.simple_roots[0].clone(), &d.simple_roots[1]).unwrap();
        let sum: Vec<i64> =
            d.simple_roots[0].iter().zip(&d.simple_roots[1]).map(|(a, b)| a + b).collect();
        assert_eq!(image, sum);
        // Involution and fixed hyperplane.
        let back = d.reflect(&d.simple_roots[0].clone(), &image).unwrap();
        assert_eq!(back, d.simple_roots[1]);
        assert!(d.reflect(&vec![5, 7], &d.simple_roots[1]).is_err(), "not a root");
    }

    #[test]
    fn highest_coroot_examples() {
        let a1 = build_root_datum(Family::A, 1, LatticeKind::Root).unwrap();
        assert_eq!(a1.highest_coroot().coroot_coeffs, vec![1]);

        let a2 = build_root_datum(Family::A, 2, LatticeKind::Root).unwrap();
        assert_eq!(a2.highest_coroot().coroot_coeffs, vec![1, 1]);

        // For B2 the maximal coroot is 2α1∨ + α2∨, attached to the highest
        // short root α1 + α2.
        let b2 = build_root_datum(Family::B, 2, LatticeKind::Root).unwrap();
        assert_eq!(b2.highest_coroot().coroot_coeffs, vec![2, 1]);
        assert_eq!(b2.highest_coroot().root_coeffs, vec![1, 1]);
    }

    #[test]
    fn coroot_divisibility_depends_on_lattice() {
        // Rank one: on the root lattice α∨ = 2 ∈ 2Y; on the weight lattice
        // α∨ is primitive.
        let a1r = build_root_datum(Family::A, 1, LatticeKind::Root).unwrap();
        assert!(a1r.orbit_coroot_in_2y(0));
        let a1w = build_root_datum(Family::A, 1, LatticeKind::Weight).unwrap();
        assert!(!a1w.orbit_coroot_in_2y(0));

        // B2 on the root lattice: the short orbit (which contains α0) has
        // α∨ ∈ 2Y, the long orbit does not.
        let b2 = build_root_datum(Family::B, 2, LatticeKind::Root).unwrap();
        let short_orbit = b2.orbit_of[b2.highest_short];
        assert!(b2.orbit_coroot_in_2y(short_orbit));
        let other = 1 - short_orbit;
        assert!(!b2.orbit_coroot_in_2y(other));

        // On the weight lattice the highest coroot of B2 is primitive.
        let b2w = build_root_datum(Family::B, 2, LatticeKind::Weight).unwrap();
        assert!(!b2w.orbit_coroot_in_2y(b2w.orbit_of[b2w.highest_short]));
    }

    #[test]
    fn lambda_star_requires_divisible_coroot() {
        let a1w = build_root_datum(Family::A, 1, LatticeKind::Weight).unwrap();
        let err = ParamAssignment::from_simple_values(&a1w, &[1], Some(&[2]));
        assert!(matches!(err, Err(Error::InconsistentParameters(_))));

        let a1r = build_root_datum(Family::A, 1, LatticeKind::Root).unwrap();
        let p = ParamAssignment::from_simple_values(&a1r, &[1], Some(&[2])).unwrap();
        let ap = affine_parameters(&a1r, &p).unwrap();
        assert_eq!(ap.nvars, 2, "distinct λ and λ* give two formal parameters");
        assert_ne!(ap.slot_of_gen[0], ap.slot_of_gen[1]);
    }

    #[test]
    fn orbit_constancy_is_enforced() {
        let a2 = build_root_datum(Family::A, 2, LatticeKind::Root).unwrap();
        let err = ParamAssignment::from_simple_values(&a2, &[1, 2], None);
        assert!(matches!(err, Err(Error::InconsistentParameters(_))));
    }

    #[test]
    fn parameter_slots_match_orbit_structure() {
        // A2: a single orbit, so all three affine generators share one symbol.
        let a2 = build_root_datum(Family::A, 2, LatticeKind::Root).unwrap();
        let ap = affine_parameters(&a2, &ParamAssignment::equal_parameters(&a2)).unwrap();
        assert_eq!(ap.nvars, 1);
        assert!(ap.slot_of_gen.iter().all(|&s| s == ap.slot_of_gen[0]));

        // B2: two orbits give two symbols (long and short), with s0 sharing
        // the short orbit's symbol when λ* = λ.
        let b2 = build_root_datum(Family::B, 2, LatticeKind::Root).unwrap();
        let ap = affine_parameters(&b2, &ParamAssignment::equal_parameters(&b2)).unwrap();
        assert_eq!(ap.nvars, 2);
        let short_orbit = b2.orbit_of[b2.highest_short];
        let short_simple = b2.orbit_simple_rep[short_orbit];
        assert_eq!(ap.slot_of_gen[2], ap.slot_of_gen[short_simple]);

        // B2 with λ* ≠ λ on the short orbit: three independent symbols.
        let p = ParamAssignment::from_simple_values(&b2, &[1, 1], Some(&[1, 2])).unwrap();
        let ap = affine_parameters(&b2, &p).unwrap();
        assert_eq!(ap.nvars, 3);

        // A1 on the weight lattice: Ω swaps the two affine nodes, merging
        // their classes; a single symbol results.
        let a1w = build_root_datum(Family::A, 1, LatticeKind::Weight).unwrap();
        let ap = affine_parameters(&a1w, &ParamAssignment::equal_parameters(&a1w)).unwrap();
        assert_eq!(ap.nvars, 1);
        assert_eq!(ap.slot_of_gen[0], ap.slot_of_gen[1]);
    }

    #[test]
    fn omega_action_on_nodes() {
        // A1 weight lattice: the nontrivial γ swaps s0 and s1.
        let a1w = build_root_datum(Family::A, 1, LatticeKind::Weight).unwrap();
        let nontrivial: Vec<_> =
            a1w.omega.iter().filter(|g| g.node_perm != vec![0, 1]).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].node_perm, vec![1, 0]);

        // A2 weight lattice: Ω ≅ Z/3 acts by rotations of the affine triangle.
        let a2w = build_root_datum(Family::A, 2, LatticeKind::Weight).unwrap();
        assert_eq!(a2w.omega.len(), 3);
        for g in &a2w.omega {
            if g.node_perm == vec![0, 1, 2] {
                continue;
            }
            // A 3-cycle: no fixed node.
            assert!(g.node_perm.iter().enumerate().all(|(i, &p)| p != i));
        }
    }

    #[test]
    fn affine_diagram_bonds() {
        // Rank one: the two affine nodes are joined by an infinite bond.
        let a1 = build_root_datum(Family::A, 1, LatticeKind::Root).unwrap();
        assert_eq!(a1.m_affine(0, 1), M_INFINITY);

        // A2: the affine diagram is a triangle of simple bonds.
        let a2 = build_root_datum(Family::A, 2, LatticeKind::Root).unwrap();
        assert_eq!(a2.m_affine(0, 2), 3);
        assert_eq!(a2.m_affine(1, 2), 3);

        // B2 (alcove walls cut by coroot hyperplanes): the affine node
        // attaches to the long simple root by a 4-bond, s0 - 4 - s1 - 4 - s2.
        let b2 = build_root_datum(Family::B, 2, LatticeKind::Root).unwrap();
        assert_eq!(b2.m_affine(0, 1), 4);
        assert_eq!(b2.m_affine(0, 2), 4);
        assert_eq!(b2.m_affine(1, 2), 2);
    }

    #[test]
    fn quotient_representatives() {
        let a2w = build_root_datum(Family::A, 2, LatticeKind::Weight).unwrap();
        assert_eq!(a2w.lattice_quotient_reps().len(), 3);
        let d3w = build_root_datum(Family::D, 3, LatticeKind::Weight).unwrap();
        assert_eq!(d3w.lattice_quotient_reps().len(), 4);
        let g2 = build_root_datum(Family::G, 2, LatticeKind::Weight).unwrap();
        assert_eq!(g2.lattice_quotient_reps().len(), 1);
        // Reduction lands on canonical representatives.
        let v = a2w.reduce_mod_root_lattice(&[5, -3]);
        assert!(a2w.lattice_quotient_reps().contains(&v));
    }

    #[test]
    fn datum_file_parsing() {
        let (d, p) = parse_datum_file(
            r#"{"cartan_type": "B2", "lattice_kind": "root",
                "lambda": [1, 1], "lambda_star": [1, 2]}"#,
        )
        .unwrap();
        assert_eq!(d.cartan_type.to_string(), "B2");
        assert_eq!(d.lattice_kind, LatticeKind::Root);
        let ap = affine_parameters(&d, &p).unwrap();
        assert_eq!(ap.nvars, 3);

        let (d2, p2) = parse_datum_file(
            r#"{"cartan_type": "A", "rank": 2, "lattice_kind": "weight", "lambda": 1}"#,
        )
        .unwrap();
        assert_eq!(d2.cartan_type.to_string(), "A2");
        assert_eq!(p2.lambda, vec![1]);

        assert!(parse_datum_file("{").is_err());
        assert!(parse_datum_file(r#"{"cartan_type": "E8", "lattice_kind": "root"}"#).is_err());
        assert!(
            parse_datum_file(r#"{"cartan_type": "D2", "lattice_kind": "root"}"#).is_err(),
            "reducible rank-two D is rejected"
        );
    }

    #[test]
    fn unsupported_types_are_rejected() {
        assert!(CartanType::new(Family::A, 5).is_err());
        assert!(CartanType::new(Family::B, 1).is_err());
        assert!(CartanType::new(Family::D, 2).is_err());
        assert!(CartanType::new(Family::G, 3).is_err());
        assert!("H3".parse::<CartanType>().is_err());
    }

    #[test]
    fn dominant_shift() {
        let a2 = build_root_datum(Family::A, 2, LatticeKind::Root).unwrap();
        let x = vec![-3, 1];
        let k = a2.dominant_shift_steps(&x);
        let shifted: Vec<i64> =
            x.iter().zip(&a2.two_rho).map(|(a, b)| a + k * b).collect();
        assert!(a2.is_dominant(&shifted));
        assert!(k > 0);
        // Shift count is minimal.
        if k > 1 {
            let less: Vec<i64> =
                x.iter().zip(&a2.two_rho).map(|(a, b)| a + (k - 1) * b).collect();
            assert!(!a2.is_dominant(&less));
        }
    }

    #[test]
    fn barycenter_lies_in_the_open_alcove() {
        for t in supported_types() {
            for lk in both_lattices() {
                let d = build_root_datum(t.family, t.rank, lk).unwrap();
                let b = d.alcove_barycenter();
                // 0 < ⟨b, α∨⟩ for every positive coroot, and ⟨b, α0∨⟩ < 1.
                for i in 0..d.n_positive {
                    let mut acc = num_rational::BigRational::zero();
                    for r in 0..d.rank {
                        acc += &b[r] * int(d.roots[i].covec[r]);
                    }
                    assert!(acc.is_positive(), "{t}: barycenter on the positive side");
                    assert!(acc < BigRational::one(), "{t}: barycenter below the top wall");
                }
            }
        }
    }
}
