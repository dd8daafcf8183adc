//! Lattices in the (co)weight space, finite quotients with their bilinear and
//! quadratic data, miniscule weights, and the finite-abelian Fourier/Poisson
//! machinery.
//!
//! A [`Lattice`] is a full-rank sublattice given by a rational basis matrix in
//! simple-root coordinates together with the ambient Gram matrix. The chain
//! `coroot ⊆ ℓ ⊆ coweight` selects a compact form ([`GroupForm`]); its center
//! is `coweight/ℓ` and its fundamental group `ℓ/coroot`.
//!
//! [`QuotientGroup`] enumerates `N/M` through the Smith normal form of the
//! change-of-basis matrix, with coset representatives normalised to the
//! fundamental parallelepiped of `M` and sorted by (norm, lexicographic).
//! An optional integer `scale` multiplies the bilinear data, which is how the
//! dual-side lattices of a non-simply laced algebra (carrying a symbolic `√n`)
//! are handled with plain rational coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeSet, HashMap};

use crate::cyclo::{phase, CycScalar};
use crate::ratmat::{
    dot, imat_to_qmat, is_even_integer, is_integer, rat, rem_mod, smith_normal_form,
    F64Enumerator, QMat, Rat,
};
use crate::rootsys::{build_root_system, dual_root_system, parse_type, Family, RootSystem};
use crate::{Error, Result};

/// Full-rank lattice: columns of `basis` generate it, in simple-root
/// coordinates of the ambient root system whose Gram matrix is `gram`.
#[derive(Clone, Debug)]
pub struct Lattice {
    pub basis: QMat,
    pub gram: QMat,
    inv: std::sync::OnceLock<QMat>,
}

impl Lattice {
    pub fn new(basis: QMat, gram: QMat) -> Result<Self> {
        if basis.det().is_zero() {
            return Err(Error::Lattice("basis matrix is singular".into()));
        }
        Ok(Lattice { basis, gram, inv: std::sync::OnceLock::new() })
    }

    /// The root lattice (identity basis).
    pub fn root_lattice(rs: &RootSystem) -> Self {
        Lattice { basis: QMat::identity(rs.rank), gram: rs.gram.clone(), inv: std::sync::OnceLock::new() }
    }

    /// The coroot lattice: columns are the simple coroots `α̌_i = 2α_i/(α_i|α_i)`.
    pub fn coroot_lattice(rs: &RootSystem) -> Self {
        let basis = QMat::from_fn(rs.rank, rs.rank, |i, j| {
            if i == j {
                rat(2) / rs.gram.at(j, j)
            } else {
                Rat::zero()
            }
        });
        Lattice { basis, gram: rs.gram.clone(), inv: std::sync::OnceLock::new() }
    }

    /// Dual of the root lattice.
    pub fn coweight_lattice(rs: &RootSystem) -> Self {
        Self::root_lattice(rs).dual().expect("root lattice is full rank")
    }

    /// Dual of the coroot lattice; its basis columns are the fundamental weights.
    pub fn weight_lattice(rs: &RootSystem) -> Self {
        Self::coroot_lattice(rs).dual().expect("coroot lattice is full rank")
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// Cached inverse of the basis matrix.
    fn inv_basis(&self) -> &QMat {
        self.inv.get_or_init(|| self.basis.inverse().expect("full rank"))
    }

    /// `{x : (x|y) ∈ Z for all y in self}`.
    pub fn dual(&self) -> Result<Lattice> {
        let gb = self.gram.mul(&self.basis);
        let inv = gb.inverse().ok_or_else(|| Error::Lattice("singular basis".into()))?;
        Ok(Lattice { basis: inv.transpose(), gram: self.gram.clone(), inv: std::sync::OnceLock::new() })
    }

    /// Coordinates of `v` in this lattice's basis.
    pub fn coords(&self, v: &[Rat]) -> Vec<Rat> {
        self.inv_basis().mul_vec(v)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coords(v).iter().all(is_integer)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        self.inv_basis().mul(&other.basis).is_integral()
    }

    /// First generator of `other` outside of `self`, if any.
    pub fn violating_generator(&self, other: &Lattice) -> Option<Vec<Rat>> {
        (0..other.rank()).map(|j| other.basis.col(j)).find(|g| !self.contains(g))
    }

    /// Gram matrix of the basis vectors, `BᵀGB`.
    pub fn basis_gram(&self) -> QMat {
        self.basis.transpose().mul(&self.gram).mul(&self.basis)
    }

    pub fn det_gram(&self) -> Rat {
        self.basis_gram().det()
    }

    /// Even with respect to `scale·(·|·)`: integral pairings, even diagonal.
    pub fn is_even_scaled(&self, scale: u64) -> bool {
        let bg = self.basis_gram().scale(&rat(scale as i64));
        (0..self.rank()).all(|i| {
            (0..self.rank()).all(|j| is_integer(bg.at(i, j))) && is_even_integer(bg.at(i, i))
        })
    }

    /// Index `[sup : self]`.
    pub fn index_in(&self, sup: &Lattice) -> Result<BigInt> {
        let c = sup.inv_basis().mul(&self.basis);
        let d = c.det();
        if !is_integer(&d) {
            return Err(Error::Lattice("not a sublattice".into()));
        }
        Ok(d.numer().abs())
    }

    /// Smallest lattice containing all `gens` (must span).
    pub fn from_generators(gram: &QMat, gens: &[Vec<Rat>]) -> Result<Lattice> {
        let rank = gram.rows();
        if gens.is_empty() {
            return Err(Error::Lattice("no generators".into()));
        }
        // Clear denominators: L = (1/D)·(integer column span).
        let mut denom = BigInt::one();
        for g in gens {
            for x in g {
                denom = denom.lcm(x.denom());
            }
        }
        let d_rat = Rat::from_integer(denom);
        let cols = gens.len();
        let int_mat: Vec<Vec<BigInt>> = (0..rank)
            .map(|i| (0..cols).map(|j| (&gens[j][i] * &d_rat).numer().clone()).collect())
            .collect();
        let snf = smith_normal_form(&int_mat);
        if snf.diag.len() < rank || snf.diag.iter().take(rank).any(|d| d.is_zero()) {
            return Err(Error::Lattice("generators do not span".into()));
        }
        // Column span of A equals the span of P⁻¹·diag(d).
        let p_inv = imat_to_qmat(&snf.p).inverse().expect("unimodular");
        let basis = QMat::from_fn(rank, rank, |i, j| {
            p_inv.at(i, j) * Rat::from_integer(snf.diag[j].clone()) / &d_rat
        });
        Lattice::new(basis, gram.clone())
    }

    /// Minimal squared norm over nonzero lattice vectors, exactly.
    pub fn min_norm(&self) -> Result<Rat> {
        let bg = self.basis_gram();
        let seed =
            (0..self.rank()).map(|i| bg.at(i, i).clone()).min().expect("positive rank");
        let en = F64Enumerator::from_gram(&bg)?;
        let shift = vec![0.0; self.rank()];
        let mut candidates: Vec<Vec<i64>> = Vec::new();
        en.enumerate(&shift, seed.to_f64().unwrap(), |c, _q| {
            if c.iter().any(|&x| x != 0) {
                candidates.push(c.to_vec());
            }
        });
        let mut best: Option<Rat> = None;
        for c in candidates {
            let v: Vec<Rat> = c.iter().map(|&x| rat(x)).collect();
            let n = dot(&bg, &v, &v);
            if best.as_ref().is_none_or(|b| &n < b) {
                best = Some(n);
            }
        }
        best.ok_or_else(|| Error::Lattice("no nonzero vector within seed bound".into()))
    }
}

/// All vectors of `lattice + shift` with squared norm ≤ `bound`, exactly.
/// Enumerates in floating point with margin and filters with rational norms.
pub fn coset_vectors_within(lattice: &Lattice, shift: &[Rat], bound: &Rat) -> Vec<Vec<Rat>> {
    let bg = lattice.basis_gram();
    let en = F64Enumerator::from_gram(&bg).expect("positive definite");
    let s_coords = lattice.coords(shift);
    let s_f64: Vec<f64> = s_coords.iter().map(|x| x.to_f64().unwrap()).collect();
    let bound_f = bound.to_f64().unwrap() * (1.0 + 1e-9) + 1e-9;
    let mut cs: Vec<Vec<i64>> = Vec::new();
    en.enumerate(&s_f64, bound_f, |c, _| cs.push(c.to_vec()));
    let mut out = Vec::new();
    for c in cs {
        let x: Vec<Rat> =
            c.iter().zip(s_coords.iter()).map(|(&ci, si)| rat(ci) + si).collect();
        let v = lattice.basis.mul_vec(&x);
        if &dot(&lattice.gram, &v, &v) <= bound {
            out.push(v);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// QuotientGroup
// ---------------------------------------------------------------------------

/// A finite quotient `N/M` of full-rank lattices with `M ⊆ N`, together with
/// its pairing table `scale·(u|v) mod 1` and, when `M` is even under the
/// scaled form, the norm table `scale·(u|u) mod 2`.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    pub sup: Lattice,
    pub sub: Lattice,
    pub scale: u64,
    /// Coset representatives in the fundamental parallelepiped of `sub`,
    /// sorted by (scaled norm, lexicographic).
    pub reps: Vec<Vec<Rat>>,
    /// Invariant factors `d_1 | d_2 | ...` (entries > 1 only).
    pub invariant_factors: Vec<u64>,
    pairing: Option<Vec<Vec<Rat>>>,
    norm: Option<Vec<Rat>>,
    index: HashMap<Vec<Rat>, usize>,
}

impl QuotientGroup {
    pub fn new(sup: &Lattice, sub: &Lattice) -> Result<Self> {
        Self::with_scale(sup, sub, 1)
    }

    pub fn with_scale(sup: &Lattice, sub: &Lattice, scale: u64) -> Result<Self> {
        let c = sup.inv_basis().mul(&sub.basis);
        if !c.is_integral() {
            let genr = sup
                .violating_generator(sub)
                .map(|g| format!("{g:?}"))
                .unwrap_or_else(|| "?".into());
            return Err(Error::Lattice(format!(
                "not a sublattice: generator {genr} lies outside the ambient lattice"
            )));
        }
        let ci = c.to_int().unwrap();
        let snf = smith_normal_form(&ci);
        let order_big: BigInt = snf.diag.iter().product();
        if order_big.is_zero() {
            return Err(Error::Lattice("sublattice is not full rank".into()));
        }
        let order = order_big
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Lattice("quotient too large".into()))?;
        let diag: Vec<u64> = snf.diag.iter().map(|d| d.abs().to_u64().unwrap()).collect();
        let invariant_factors: Vec<u64> = diag.iter().copied().filter(|&d| d > 1).collect();

        // Coset representatives: x = P⁻¹·k over the SNF diagonal box, then
        // reduced into the fundamental parallelepiped of `sub`.
        let p_inv = imat_to_qmat(&snf.p).inverse().expect("unimodular");
        let sub_inv = sub.inv_basis().clone();
        let mut reps: Vec<Vec<Rat>> = Vec::with_capacity(order as usize);
        let mut k = vec![0u64; diag.len()];
        loop {
            let kv: Vec<Rat> = k.iter().map(|&x| rat(x as i64)).collect();
            let x = p_inv.mul_vec(&kv);
            let v = sup.basis.mul_vec(&x);
            let t = sub_inv.mul_vec(&v);
            let t_frac: Vec<Rat> = t.iter().map(|ti| ti - ti.floor()).collect();
            reps.push(sub.basis.mul_vec(&t_frac));
            // mixed-radix increment over the diagonal box
            let mut i = 0;
            loop {
                if i == diag.len() {
                    break;
                }
                k[i] += 1;
                if k[i] < diag[i] {
                    break;
                }
                k[i] = 0;
                i += 1;
            }
            if i == diag.len() {
                break;
            }
        }
        let scale_rat = rat(scale as i64);
        reps.sort_by(|a, b| {
            let na = dot(&sup.gram, a, a) * &scale_rat;
            let nb = dot(&sup.gram, b, b) * &scale_rat;
            na.cmp(&nb).then_with(|| a.cmp(b))
        });
        reps.dedup();
        if reps.len() as u64 != order {
            return Err(Error::Lattice(format!(
                "coset enumeration produced {} representatives, expected {order}",
                reps.len()
            )));
        }

        let index: HashMap<Vec<Rat>, usize> =
            reps.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        // Pairing defined when scale·(sub|sup) ⊆ Z.
        let cross =
            sub.basis.transpose().mul(&sup.gram).mul(&sup.basis).scale(&scale_rat);
        let pairing = if cross.is_integral() {
            Some(
                (0..reps.len())
                    .map(|i| {
                        (0..reps.len())
                            .map(|j| {
                                rem_mod(&(dot(&sup.gram, &reps[i], &reps[j]) * &scale_rat), 1)
                            })
                            .collect()
                    })
                    .collect(),
            )
        } else {
            None
        };
        // Norm defined mod 2 when additionally `sub` is even under the scaled form.
        let norm = if pairing.is_some() && sub.is_even_scaled(scale) {
            Some(
                reps.iter()
                    .map(|r| rem_mod(&(dot(&sup.gram, r, r) * &scale_rat), 2))
                    .collect(),
            )
        } else {
            None
        };

        Ok(QuotientGroup {
            sup: sup.clone(),
            sub: sub.clone(),
            scale,
            reps,
            invariant_factors,
            pairing,
            norm,
            index,
        })
    }

    pub fn order(&self) -> u64 {
        self.reps.len() as u64
    }

    pub fn rep(&self, i: usize) -> &[Rat] {
        &self.reps[i]
    }

    /// Index of the coset containing `v`.
    pub fn index_of(&self, v: &[Rat]) -> Option<usize> {
        let t = self.sub.coords(v);
        let t_frac: Vec<Rat> = t.iter().map(|ti| ti - ti.floor()).collect();
        let nv = self.sub.basis.mul_vec(&t_frac);
        self.index.get(&nv).copied()
    }

    pub fn zero_index(&self) -> usize {
        self.index_of(&vec![Rat::zero(); self.sup.rank()]).expect("zero coset")
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let s: Vec<Rat> =
            self.reps[i].iter().zip(&self.reps[j]).map(|(a, b)| a + b).collect();
        self.index_of(&s).expect("closed under addition")
    }

    pub fn neg(&self, i: usize) -> usize {
        let s: Vec<Rat> = self.reps[i].iter().map(|a| -a).collect();
        self.index_of(&s).expect("closed under negation")
    }

    /// `scale·(u_i|u_j) mod 1`.
    pub fn pairing_frac(&self, i: usize, j: usize) -> Result<Rat> {
        self.pairing
            .as_ref()
            .map(|p| p[i][j].clone())
            .ok_or_else(|| Error::Lattice("pairing not defined for this quotient".into()))
    }

    /// `scale·(u_i|u_i) mod 2`.
    pub fn norm_frac(&self, i: usize) -> Result<Rat> {
        self.norm
            .as_ref()
            .map(|n| n[i].clone())
            .ok_or_else(|| Error::Lattice("sublattice is not even; no norm table".into()))
    }

    pub fn has_norm(&self) -> bool {
        self.norm.is_some()
    }

    /// `u ↦ χ_u` is injective: every nonzero class pairs non-integrally with
    /// some class.
    pub fn pairing_nondegenerate(&self) -> bool {
        let Some(p) = self.pairing.as_ref() else { return false };
        let zero = self.zero_index();
        (0..self.reps.len())
            .filter(|&i| i != zero)
            .all(|i| p[i].iter().any(|x| !x.is_zero()))
    }

    /// Indices of classes whose representative lies in `ell`.
    pub fn subgroup_indices(&self, ell: &Lattice) -> Vec<usize> {
        (0..self.reps.len()).filter(|&i| ell.contains(&self.reps[i])).collect()
    }

    /// The full addition table, `table[i][j] = index of u_i + u_j`.
    pub fn addition_table(&self) -> Vec<Vec<usize>> {
        let n = self.reps.len();
        let mut table = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let k = self.add(i, j);
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        table
    }

    /// Every subgroup, as sorted index sets (fixed-point closure on generators).
    pub fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let zero = self.zero_index();
        let table = self.addition_table();
        let closure = |gens: &BTreeSet<usize>| -> BTreeSet<usize> {
            let mut s: BTreeSet<usize> = BTreeSet::new();
            s.insert(zero);
            loop {
                let mut grew = false;
                let cur: Vec<usize> = s.iter().copied().collect();
                for &a in &cur {
                    for g in gens {
                        if s.insert(table[a][*g]) {
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            s
        };
        let mut subgroups: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let trivial = closure(&BTreeSet::new());
        let mut worklist: Vec<BTreeSet<usize>> = vec![trivial.clone()];
        subgroups.insert(trivial);
        while let Some(s) = worklist.pop() {
            for g in 0..self.reps.len() {
                if s.contains(&g) {
                    continue;
                }
                let mut gens = s.clone();
                gens.insert(g);
                let bigger = closure(&gens);
                if subgroups.insert(bigger.clone()) {
                    worklist.push(bigger);
                }
            }
        }
        subgroups.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// The sublattice of `sup` generated by `sub` and the classes in `indices`.
    pub fn sublattice_for(&self, indices: &[usize]) -> Result<Lattice> {
        let mut gens: Vec<Vec<Rat>> =
            (0..self.sub.rank()).map(|j| self.sub.basis.col(j)).collect();
        for &i in indices {
            gens.push(self.reps[i].to_vec());
        }
        Lattice::from_generators(&self.sup.gram, &gens)
    }
}

// ---------------------------------------------------------------------------
// GroupForm
// ---------------------------------------------------------------------------

/// A compact form of the simple group: the lattice `ℓ` with
/// `coroot ⊆ ℓ ⊆ coweight`.
#[derive(Clone, Debug)]
pub struct GroupForm {
    pub rs: RootSystem,
    pub ell: Lattice,
    pub name: String,
}

impl GroupForm {
    pub fn new(rs: RootSystem, ell: Lattice, name: String) -> Result<Self> {
        let coroot = Lattice::coroot_lattice(&rs);
        let coweight = Lattice::coweight_lattice(&rs);
        if !ell.contains_lattice(&coroot) {
            let g = ell
                .violating_generator(&coroot)
                .map(|g| format!("{g:?}"))
                .unwrap_or_default();
            return Err(Error::Lattice(format!(
                "coroot lattice not contained in ℓ (violating generator {g})"
            )));
        }
        if !coweight.contains_lattice(&ell) {
            let g = coweight
                .violating_generator(&ell)
                .map(|g| format!("{g:?}"))
                .unwrap_or_default();
            return Err(Error::Lattice(format!(
                "ℓ not contained in the coweight lattice (violating generator {g})"
            )));
        }
        Ok(GroupForm { rs, ell, name })
    }

    pub fn simply_connected(rs: &RootSystem) -> Self {
        let ell = Lattice::coroot_lattice(rs);
        let name = standard_name(rs, &ell);
        GroupForm { rs: rs.clone(), ell, name }
    }

    pub fn adjoint(rs: &RootSystem) -> Self {
        let ell = Lattice::coweight_lattice(rs);
        let name = standard_name(rs, &ell);
        GroupForm { rs: rs.clone(), ell, name }
    }

    pub fn is_simply_laced(&self) -> bool {
        self.rs.is_simply_laced()
    }

    /// `Z(G) = coweight/ℓ`.
    pub fn center(&self) -> Result<QuotientGroup> {
        QuotientGroup::new(&Lattice::coweight_lattice(&self.rs), &self.ell)
    }

    /// `π₁(G) = ℓ/coroot`.
    pub fn pi1(&self) -> Result<QuotientGroup> {
        QuotientGroup::new(&self.ell, &Lattice::coroot_lattice(&self.rs))
    }

    pub fn center_order(&self) -> u64 {
        self.ell
            .index_in(&Lattice::coweight_lattice(&self.rs))
            .expect("chain")
            .to_u64()
            .expect("small")
    }

    pub fn pi1_order(&self) -> u64 {
        Lattice::coroot_lattice(&self.rs)
            .index_in(&self.ell)
            .expect("chain")
            .to_u64()
            .expect("small")
    }

    /// All forms of the given type: one per subgroup of the center of the
    /// simply connected form.
    pub fn all_forms(rs: &RootSystem) -> Result<Vec<GroupForm>> {
        let z = QuotientGroup::new(
            &Lattice::coweight_lattice(rs),
            &Lattice::coroot_lattice(rs),
        )?;
        let mut out = Vec::new();
        for sub in z.all_subgroups() {
            let ell = z.sublattice_for(&sub)?;
            let name = standard_name(rs, &ell);
            out.push(GroupForm::new(rs.clone(), ell, name)?);
        }
        Ok(out)
    }
}

/// A display name for the form: matches the classical names where they exist.
pub fn standard_name(rs: &RootSystem, ell: &Lattice) -> String {
    let coroot = Lattice::coroot_lattice(rs);
    let coweight = Lattice::coweight_lattice(rs);
    let pi1 = coroot.index_in(ell).map(|x| x.to_u64().unwrap()).unwrap_or(0);
    let z = ell.index_in(&coweight).map(|x| x.to_u64().unwrap()).unwrap_or(0);
    let r = rs.rank;
    match rs.family {
        Family::A => {
            let n = r + 1;
            if pi1 == 1 {
                format!("SU({n})")
            } else {
                format!("SU({n})/Z{pi1}")
            }
        }
        Family::B => {
            if pi1 == 1 {
                format!("Spin({})", 2 * r + 1)
            } else {
                format!("SO({})", 2 * r + 1)
            }
        }
        Family::C => {
            if pi1 == 1 {
                format!("Sp({r})")
            } else {
                format!("Sp({r})/Z2")
            }
        }
        Family::D => {
            let m = 2 * r;
            if pi1 == 1 {
                format!("Spin({m})")
            } else if z == 1 {
                format!("PSO({m})")
            } else {
                // order-2 quotient: SO when the vector class (the coset of the
                // first fundamental coweight) is inside ℓ, semispin otherwise.
                let cw1 = coweight.basis.col(0);
                if ell.contains(&cw1) {
                    format!("SO({m})")
                } else {
                    format!("Ss({m})")
                }
            }
        }
        Family::E => {
            if pi1 == 1 {
                format!("E{r}")
            } else {
                format!("E{r}ad")
            }
        }
        Family::F => "F4".to_string(),
        Family::G => "G2".to_string(),
    }
}

/// Resolve CLI names: `SU(6)/Z2`, `Spin(7)`, `SO(10)`, `Sp(3)`, `E7ad`,
/// `simply-connected B3`, `adjoint D5`, or a bare type like `E8`.
pub fn form_from_name(name: &str) -> Result<GroupForm> {
    let s = name.trim();
    let err = || Error::Parse(format!("unknown group form: {name}"));
    let num = |inner: &str| -> Result<usize> { inner.parse().map_err(|_| err()) };

    if let Some(rest) = s.strip_prefix("simply-connected ") {
        let (f, r) = parse_type(rest)?;
        return Ok(GroupForm::simply_connected(&build_root_system(f, r)?));
    }
    if let Some(rest) = s.strip_prefix("adjoint ") {
        let (f, r) = parse_type(rest)?;
        return Ok(GroupForm::adjoint(&build_root_system(f, r)?));
    }
    if let Some(body) = s.strip_prefix("SU(") {
        let (inner, rest) = body.split_once(')').ok_or_else(err)?;
        let n = num(inner)?;
        if n < 2 {
            return Err(err());
        }
        let rs = build_root_system(Family::A, n - 1)?;
        let k: u64 = if rest.is_empty() {
            1
        } else {
            num(rest.strip_prefix("/Z").ok_or_else(err)?)? as u64
        };
        if k == 0 || !(n as u64).is_multiple_of(k) {
            return Err(Error::Parse(format!("SU({n})/Z{k}: {k} does not divide {n}")));
        }
        return su_quotient(&rs, k);
    }
    if let Some(body) = s.strip_prefix("Spin(") {
        let (inner, rest) = body.split_once(')').ok_or_else(err)?;
        if !rest.is_empty() {
            return Err(err());
        }
        return Ok(GroupForm::simply_connected(&spin_type(num(inner)?)?));
    }
    if let Some(body) = s.strip_prefix("PSO(") {
        let (inner, rest) = body.split_once(')').ok_or_else(err)?;
        let m = num(inner)?;
        if !rest.is_empty() || m % 2 != 0 {
            return Err(err());
        }
        return Ok(GroupForm::adjoint(&spin_type(m)?));
    }
    if let Some(body) = s.strip_prefix("SO(") {
        let (inner, rest) = body.split_once(')').ok_or_else(err)?;
        let m = num(inner)?;
        let rs = spin_type(m)?;
        if rest == "/Z2" && m % 2 == 0 {
            return Ok(GroupForm::adjoint(&rs));
        }
        if !rest.is_empty() {
            return Err(err());
        }
        if m % 2 == 1 {
            return Ok(GroupForm::adjoint(&rs));
        }
        // SO(2r): ℓ generated by the coroots plus the first fundamental coweight.
        let coroot = Lattice::coroot_lattice(&rs);
        let cw = Lattice::coweight_lattice(&rs);
        let mut gens: Vec<Vec<Rat>> = (0..rs.rank).map(|j| coroot.basis.col(j)).collect();
        gens.push(cw.basis.col(0));
        let ell = Lattice::from_generators(&rs.gram, &gens)?;
        return GroupForm::new(rs, ell, format!("SO({m})"));
    }
    if let Some(body) = s.strip_prefix("Sp(") {
        let (inner, rest) = body.split_once(')').ok_or_else(err)?;
        let n = num(inner)?;
        let rs = build_root_system(Family::C, n)?;
        return match rest {
            "" => Ok(GroupForm::simply_connected(&rs)),
            "/Z2" => Ok(GroupForm::adjoint(&rs)),
            _ => Err(err()),
        };
    }
    match s {
        "E6" | "E7" | "E8" => {
            let (f, r) = parse_type(s)?;
            Ok(GroupForm::simply_connected(&build_root_system(f, r)?))
        }
        "E6ad" | "E7ad" => {
            let (f, r) = parse_type(&s[..2])?;
            Ok(GroupForm::adjoint(&build_root_system(f, r)?))
        }
        "F4" => Ok(GroupForm::simply_connected(&build_root_system(Family::F, 4)?)),
        "G2" => Ok(GroupForm::simply_connected(&build_root_system(Family::G, 2)?)),
        _ => {
            // a bare type name means the simply connected form
            let (f, r) = parse_type(s)?;
            Ok(GroupForm::simply_connected(&build_root_system(f, r)?))
        }
    }
}

fn spin_type(m: usize) -> Result<RootSystem> {
    if m % 2 == 1 {
        build_root_system(Family::B, (m.saturating_sub(1)) / 2)
    } else {
        build_root_system(Family::D, m / 2)
    }
}

/// `SU(n)/Z_k`: ℓ is the preimage of the order-`k` subgroup of the cyclic center.
fn su_quotient(rs: &RootSystem, k: u64) -> Result<GroupForm> {
    let coroot = Lattice::coroot_lattice(rs);
    if k == 1 {
        return Ok(GroupForm::simply_connected(rs));
    }
    let z = QuotientGroup::new(&Lattice::coweight_lattice(rs), &coroot)?;
    for sub in z.all_subgroups() {
        if sub.len() as u64 == k {
            let ell = z.sublattice_for(&sub)?;
            let name = standard_name(rs, &ell);
            return GroupForm::new(rs.clone(), ell, name);
        }
    }
    Err(Error::Parse(format!("no subgroup of order {k} in the center")))
}

/// The Langlands dual form: dual type, `ᴸℓ = √n·ℓ*` expressed in the dual
/// system's own simple-root coordinates (the `√n` stays symbolic).
pub fn langlands_dual_form(g: &GroupForm) -> Result<GroupForm> {
    let dual_rs = dual_root_system(&g.rs);
    let ell_star = g.ell.dual()?;
    // β_i = (1/√n)·α̌_{σ(i)}; a stored vector w₀ has dual-side coordinates
    // c_i = n·(diag(d)·w₀)_{σ(i)} where α̌_j = (1/d_j)·α_j, d_j = (α_j|α_j)/2.
    let r = g.rs.rank;
    let sigma = g.rs.dual_node_permutation();
    let n = rat(g.rs.n_g as i64);
    let mut conv = QMat::zeros(r, r);
    for i in 0..r {
        let dj = g.rs.gram.at(sigma[i], sigma[i]) / rat(2);
        conv.set(i, sigma[i], &n * dj);
    }
    let basis = conv.mul(&ell_star.basis);
    let ell = Lattice::new(basis, dual_rs.gram.clone())?;
    let name = standard_name(&dual_rs, &ell);
    GroupForm::new(dual_rs, ell, name)
}

// ---------------------------------------------------------------------------
// Miniscule weights
// ---------------------------------------------------------------------------

/// One weight per class of `ℓ*/Λ`: the unique dominant weight of minimal norm
/// (`0` for the trivial class). Sorted by (norm, lexicographic).
///
/// The bounded enumeration per coset starts from the norm of the coset
/// representative (an upper bound for the minimum) capped by the largest
/// fundamental-weight norm; near-minimal candidates are pre-selected in
/// floating point with a safety window and confirmed with rational norms.
pub fn miniscule_weights(g: &GroupForm) -> Result<Vec<Vec<Rat>>> {
    let root = Lattice::root_lattice(&g.rs);
    let ell_star = g.ell.dual()?;
    let q = QuotientGroup::new(&ell_star, &root)?;
    let r = g.rs.rank;
    let mut max_fund = Rat::zero();
    for i in 0..r {
        let w = g.rs.fundamental_weights.col(i);
        let n = dot(&g.rs.gram, &w, &w);
        if n > max_fund {
            max_fund = n;
        }
    }
    let bg = root.basis_gram();
    let en = F64Enumerator::from_gram(&bg)?;
    let mut out: Vec<Vec<Rat>> = Vec::with_capacity(q.order() as usize);
    for i in 0..q.order() as usize {
        let rep = q.rep(i);
        if rep.iter().all(|x| x.is_zero()) {
            out.push(vec![Rat::zero(); r]);
            continue;
        }
        let rep_norm = dot(&g.rs.gram, rep, rep);
        let bound = rep_norm.min(max_fund.clone()).to_f64().unwrap() * (1.0 + 1e-9) + 1e-9;
        // Near-minimal integer offsets, selected numerically.
        let s_coords: Vec<f64> =
            root.coords(rep).iter().map(|x| x.to_f64().unwrap()).collect();
        let window = 1e-6;
        let mut qmin = f64::INFINITY;
        let mut near: Vec<(Vec<i64>, f64)> = Vec::new();
        en.enumerate(&s_coords, bound, |c, qv| {
            if qv < qmin {
                qmin = qv;
                near.retain(|(_, q0)| *q0 <= qmin + window);
            }
            if qv <= qmin + window {
                near.push((c.to_vec(), qv));
            }
        });
        // Exact norms of the surviving candidates.
        let mut cands: Vec<(Rat, Vec<Rat>)> = Vec::new();
        for (c, _) in near {
            let v: Vec<Rat> = c.iter().zip(rep.iter()).map(|(&ci, si)| rat(ci) + si).collect();
            let n = dot(&g.rs.gram, &v, &v);
            cands.push((n, v));
        }
        let min_norm = cands
            .iter()
            .map(|(n, _)| n.clone())
            .min()
            .ok_or_else(|| Error::Lattice("no coset vector within the bound".into()))?;
        let mut dominant: Vec<Vec<Rat>> = cands
            .into_iter()
            .filter(|(n, _)| *n == min_norm)
            .map(|(_, v)| v)
            .filter(|v| {
                (0..r).all(|i| {
                    // (v|α_i) ≥ 0 ⇔ ⟨v, α̌_i⟩ ≥ 0
                    let mut p = Rat::zero();
                    for (k, vk) in v.iter().enumerate() {
                        p += vk * g.rs.gram.at(k, i);
                    }
                    !p.is_negative()
                })
            })
            .collect();
        dominant.sort();
        if dominant.len() != 1 {
            return Err(Error::Lattice(format!(
                "expected a unique dominant minimal weight, found {} in class {i} of {}",
                dominant.len(),
                g.name
            )));
        }
        out.push(dominant.pop().unwrap());
    }
    out.sort_by(|a, b| {
        dot(&g.rs.gram, a, a).cmp(&dot(&g.rs.gram, b, b)).then_with(|| a.cmp(b))
    });
    Ok(out)
}

/// Indices (1-based, Bourbaki) of the fundamental weights that are miniscule:
/// `⟨ω, α̌⟩ ∈ {−1,0,1}` for every root.
pub fn minuscule_diagram_check(rs: &RootSystem) -> Vec<usize> {
    let mut out = Vec::new();
    for i in 0..rs.rank {
        let w = rs.fundamental_weights.col(i);
        let ok = (0..rs.roots.len()).all(|k| {
            let p = rs.pairing_with_coroot(&w, k);
            p == rat(-1) || p.is_zero() || p == rat(1)
        });
        if ok {
            out.push(i + 1);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Finite Fourier transform and discrete Poisson summation
// ---------------------------------------------------------------------------

/// `f̂(u) = Σ_a e^{2πi(u|a)} f(a)` on a quotient whose pairing identifies it
/// with its character group.
pub fn finite_fourier(a: &QuotientGroup, f: &[CycScalar]) -> Result<Vec<CycScalar>> {
    if !a.pairing_nondegenerate() {
        return Err(Error::Domain(
            "pairing is degenerate: the quotient is not identified with its dual".into(),
        ));
    }
    if f.len() != a.order() as usize {
        return Err(Error::Domain("function table has wrong length".into()));
    }
    let n = a.order() as usize;
    let mut out = Vec::with_capacity(n);
    for u in 0..n {
        let mut acc = CycScalar::zero();
        for (x, fx) in f.iter().enumerate() {
            let p = a.pairing_frac(u, x)?;
            acc = acc.add(&phase(&(rat(2) * p)).mul(fx));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Inverse transform: `f(a) = (1/|A|) Σ_u e^{-2πi(u|a)} f̂(u)`.
pub fn inverse_fourier(a: &QuotientGroup, fhat: &[CycScalar]) -> Result<Vec<CycScalar>> {
    if fhat.len() != a.order() as usize {
        return Err(Error::Domain("function table has wrong length".into()));
    }
    let n = a.order() as usize;
    let inv = Rat::new(BigInt::one(), BigInt::from(n));
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let mut acc = CycScalar::zero();
        for (u, fu) in fhat.iter().enumerate() {
            let p = a.pairing_frac(u, x)?;
            acc = acc.add(&phase(&(rat(-2) * p)).mul(fu));
        }
        out.push(acc.scale(&inv));
    }
    Ok(out)
}

/// Discrete Poisson summation over the subgroup `B` given by rep indices:
/// `(1/|B|) Σ_{a∈B} f(a) = (1/|A|) Σ_{χ trivial on B} f̂(χ)`, exactly.
pub fn poisson_check(a: &QuotientGroup, b: &[usize], f: &[CycScalar]) -> Result<bool> {
    let bset: BTreeSet<usize> = b.iter().copied().collect();
    if !bset.contains(&a.zero_index()) {
        return Err(Error::Domain("subgroup must contain the zero class".into()));
    }
    for &x in &bset {
        for &y in &bset {
            if !bset.contains(&a.add(x, y)) {
                return Err(Error::Domain(format!(
                    "not closed under the group law: {x}+{y} escapes"
                )));
            }
        }
    }
    let fhat = finite_fourier(a, f)?;
    let mut lhs = CycScalar::zero();
    for &x in &bset {
        lhs = lhs.add(&f[x]);
    }
    lhs = lhs.scale(&Rat::new(BigInt::one(), BigInt::from(bset.len())));
    let mut rhs = CycScalar::zero();
    for u in 0..a.order() as usize {
        let trivial = bset
            .iter()
            .all(|&x| a.pairing_frac(u, x).map(|p| p.is_zero()).unwrap_or(false));
        if trivial {
            rhs = rhs.add(&fhat[u]);
        }
    }
    rhs = rhs.scale(&Rat::new(BigInt::one(), BigInt::from(a.order())));
    Ok(lhs.eq_exact(&rhs))
}
