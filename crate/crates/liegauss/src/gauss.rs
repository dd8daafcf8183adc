//! The Gauss-sum analog for compact forms and its reciprocity identities:
//! the simply laced reciprocity under Langlands duality, the generalized
//! Gauss sums of `SU(pq)/Z_p`, quadratic reciprocity, and the van der Blij /
//! Milgram formula for even lattices.
//!
//! `|Z(G)|` is always computed as a lattice index; the center table of the
//! classification is test data, never an input.

use num_bigint::BigInt;

use crate::cyclo::{fold_sqrt, phase, CycScalar, RadScalar};
use crate::lattices::{langlands_dual_form, GroupForm, Lattice, QuotientGroup};
use crate::ratmat::{frac, Rat};
use crate::rootsys::RootSystem;
use crate::{Error, Result};

/// `𝒢(G) = |Z(G)|^{-1/2} Σ_{μ ∈ M(G)} e^{iπ(μ|μ)}` for a simply laced form.
///
/// `(μ|μ) mod 2` is constant on classes of `ℓ*/Λ` (the root lattice is even),
/// so the sum is taken over the quotient's norm table; no weight enumeration
/// is needed and the computation stays cheap at any rank. The
/// miniscule-weight route is the independent cross-check in the tests.
pub fn gauss_sum(g: &GroupForm) -> Result<RadScalar> {
    if !g.is_simply_laced() {
        return Err(Error::NotSimplyLaced(format!(
            "the Gauss-sum analog for {} ({})",
            g.name,
            g.rs.type_name()
        )));
    }
    let q = QuotientGroup::new(&g.ell.dual()?, &Lattice::root_lattice(&g.rs))?;
    let mut sum = CycScalar::zero();
    for i in 0..q.order() as usize {
        sum = sum.add(&phase(&q.norm_frac(i)?));
    }
    Ok(RadScalar::inv_sqrt(q.order()).mul(&RadScalar::from_cyc(sum)))
}

/// Reciprocity under Langlands duality: `𝒢(G) = conj(𝒢(ᴸG))·e^{iπr/4}`, exactly.
pub fn verify_reciprocity(g: &GroupForm) -> Result<bool> {
    let lhs = gauss_sum(g)?;
    let dual = langlands_dual_form(g)?;
    let rhs = gauss_sum(&dual)?
        .conj()
        .mul(&RadScalar::from_cyc(phase(&frac(g.rs.rank as i64, 4))));
    Ok(lhs.eq_exact(&rhs))
}

/// The summed identity for the simply connected form:
/// `Σ_{μ∈M(g)} e^{iπ(μ|μ)} = √|Z(G̃)|·e^{iπr/4}`, exactly.
pub fn verify_gauss_identity(rs: &RootSystem) -> Result<bool> {
    if !rs.is_simply_laced() {
        return Err(Error::NotSimplyLaced(format!("the Gauss identity for {}", rs.type_name())));
    }
    let g = GroupForm::simply_connected(rs);
    let q = QuotientGroup::new(&g.ell.dual()?, &Lattice::root_lattice(rs))?;
    let mut lhs = CycScalar::zero();
    for i in 0..q.order() as usize {
        lhs = lhs.add(&phase(&q.norm_frac(i)?));
    }
    let rhs = fold_sqrt(q.order())?.mul(&phase(&frac(rs.rank as i64, 4)));
    Ok(lhs.eq_exact(&rhs))
}

/// Generalized Gauss sum over all `q` classes of `M(SU(pq)/Z_p)`:
/// `Σ_{k=0}^{q-1} e^{iπ p k(q-k)/q}` (the `k=0` term contributes 1).
pub fn generalized_gauss(p: u64, q: u64) -> CycScalar {
    let mut acc = CycScalar::zero();
    for k in 0..q {
        let e = Rat::new(BigInt::from(p * k * (q - k)), BigInt::from(q));
        acc = acc.add(&phase(&e));
    }
    acc
}

/// The sum exactly as written with the `k=0` term omitted
/// (`Σ_{k=1}^{q-1}`); `generalized_gauss` = 1 + this.
pub fn generalized_gauss_partial(p: u64, q: u64) -> CycScalar {
    generalized_gauss(p, q).sub(&CycScalar::one())
}

/// `𝒢(p,q) = √(q/p)·e^{iπ(pq-1)/4}·conj(𝒢(q,p))`, exactly, and cross-checked
/// against the reciprocity of `SU(pq)/Z_p` when `pq > 1`.
pub fn verify_supq(p: u64, q: u64) -> Result<bool> {
    if p == 0 || q == 0 {
        return Err(Error::Domain("p, q must be positive".into()));
    }
    let lhs = RadScalar::from_cyc(generalized_gauss(p, q));
    // √(q/p) = √(qp)/p
    let sqrt_q_over_p = RadScalar {
        cyc: CycScalar::one(),
        rad: 1,
        denom: BigInt::from(p),
    }
    .mul(&RadScalar { cyc: fold_sqrt(p * q)?, rad: 1, denom: BigInt::from(1) });
    let rhs = sqrt_q_over_p
        .mul(&RadScalar::from_cyc(phase(&frac((p * q) as i64 - 1, 4))))
        .mul(&RadScalar::from_cyc(generalized_gauss(q, p).conj()));
    let direct = lhs.eq_exact(&rhs);
    if p * q > 1 && p > 1 {
        let form = crate::lattices::form_from_name(&format!("SU({})/Z{}", p * q, p))?;
        let via_form = verify_reciprocity(&form)?;
        return Ok(direct && via_form);
    }
    Ok(direct)
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Legendre symbol by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i32> {
    if !is_odd_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    let a_mod = a.rem_euclid(p as i64) as u64;
    if a_mod == 0 {
        return Ok(0);
    }
    let e = mod_pow(a_mod, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Legendre symbol recovered from the exact identity
/// `𝒢(p,q) = (p/q)·𝒢(1,q)` on the `q`-term sums.
pub fn legendre_via_gauss(p: u64, q: u64) -> Result<i32> {
    if !is_odd_prime(q) {
        return Err(Error::Domain(format!("{q} is not an odd prime")));
    }
    let gp = generalized_gauss(p, q);
    let g1 = generalized_gauss(1, q);
    if gp.eq_exact(&g1) {
        Ok(1)
    } else if gp.eq_exact(&g1.neg()) {
        Ok(-1)
    } else {
        Err(Error::Domain(format!(
            "𝒢({p},{q}) is not ±𝒢(1,{q}); inputs are not coprime odd primes"
        )))
    }
}

/// Quadratic reciprocity for distinct odd primes, by Euler's criterion and
/// independently through the Gauss-sum route.
pub fn verify_quadratic_reciprocity(p: u64, q: u64) -> Result<bool> {
    if !is_odd_prime(p) || !is_odd_prime(q) || p == q {
        return Err(Error::Domain(format!("need distinct odd primes, got {p}, {q}")));
    }
    let lp = legendre(p as i64, q)?;
    let lq = legendre(q as i64, p)?;
    let sign = if ((p - 1) / 2 * ((q - 1) / 2)).is_multiple_of(2) { 1 } else { -1 };
    let euler_route = lp * lq == sign;
    let gp = legendre_via_gauss(p, q)?;
    let gq = legendre_via_gauss(q, p)?;
    Ok(euler_route && gp == lp && gq == lq && gp * gq == sign)
}

/// Van der Blij / Milgram for a positive definite even lattice:
/// `Σ_{μ∈L*/L} e^{iπ(μ|μ)} = √|L*/L|·e^{iπσ/4}` with `σ = rank`.
pub fn milgram(l: &Lattice) -> Result<bool> {
    if !l.is_even_scaled(1) {
        return Err(Error::Domain("Milgram needs an even lattice".into()));
    }
    let disc = QuotientGroup::new(&l.dual()?, l)?;
    let mut lhs = CycScalar::zero();
    for i in 0..disc.order() as usize {
        lhs = lhs.add(&phase(&disc.norm_frac(i)?));
    }
    let rhs = fold_sqrt(disc.order())?.mul(&phase(&frac(l.rank() as i64, 4)));
    Ok(lhs.eq_exact(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::{form_from_name, miniscule_weights};
    use crate::ratmat::QMat;
    use crate::rootsys::{build_root_system, Family};
    use num_traits::One;

    fn rs(f: Family, r: usize) -> RootSystem {
        build_root_system(f, r).unwrap()
    }

    #[test]
    fn gauss_sum_examples() {
        // 𝒢(E8) = 1
        let e8 = GroupForm::simply_connected(&rs(Family::E, 8));
        assert!(gauss_sum(&e8).unwrap().eq_exact(&RadScalar::one()));
        // 𝒢(SU(2)) = e^{iπ/4}
        let su2 = GroupForm::simply_connected(&rs(Family::A, 1));
        let expect = RadScalar::from_cyc(phase(&frac(1, 4)));
        assert!(gauss_sum(&su2).unwrap().eq_exact(&expect));
        // 𝒢(E6~) = (1/√3)(1+2e^{4πi/3}) = e^{6πi/4}
        let e6 = GroupForm::simply_connected(&rs(Family::E, 6));
        let expect = RadScalar::from_cyc(phase(&frac(6, 4)));
        assert!(gauss_sum(&e6).unwrap().eq_exact(&expect));
        // non-simply laced rejected
        let b2 = GroupForm::simply_connected(&rs(Family::B, 2));
        assert!(matches!(gauss_sum(&b2), Err(Error::NotSimplyLaced(_))));
    }

    #[test]
    fn gauss_sum_unit_modulus_simply_connected() {
        // 𝒢(G~) = e^{iπr/4} has unit modulus. Intermediate forms need not:
        // a norm-1 miniscule class contributes 1 + e^{iπ} = 0.
        for name in ["SU(5)", "SU(6)/Z2", "E7", "Spin(8)", "Spin(14)"] {
            let g = form_from_name(name).unwrap();
            let v = gauss_sum(&g).unwrap();
            let m = v.mul(&v.conj()).normalize();
            assert!(m.eq_exact(&CycScalar::one()), "{name}: |𝒢|² = {m}");
        }
        for name in ["SO(10)", "SU(4)/Z2"] {
            let g = form_from_name(name).unwrap();
            let v = gauss_sum(&g).unwrap();
            assert!(v.is_zero(), "{name} has a vanishing Gauss sum");
            // reciprocity is still exact: both sides vanish
            assert!(verify_reciprocity(&g).unwrap(), "{name}");
        }
    }

    #[test]
    fn reciprocity_examples() {
        for name in ["SU(6)/Z2", "E8", "SU(2)"] {
            let g = form_from_name(name).unwrap();
            assert!(verify_reciprocity(&g).unwrap(), "{name}");
        }
    }

    #[test]
    fn gauss_identity_table_rows() {
        // A4: Σ_{k=0}^{4} e^{iπk(5-k)/5} = √5·e^{iπ}
        assert!(verify_gauss_identity(&rs(Family::A, 4)).unwrap());
        // D6: 1 + e^{iπ} + 2e^{iπ6/4} = 2·e^{iπ6/4}
        assert!(verify_gauss_identity(&rs(Family::D, 6)).unwrap());
        // E7: 1 + e^{3πi/2} = √2·e^{7πi/4}
        assert!(verify_gauss_identity(&rs(Family::E, 7)).unwrap());
        let lhs = CycScalar::one().add(&phase(&frac(3, 2)));
        let rhs = fold_sqrt(2).unwrap().mul(&phase(&frac(7, 4)));
        assert!(lhs.eq_exact(&rhs));
    }

    #[test]
    fn generalized_gauss_values() {
        // 𝒢(1,5) = √5·e^{iπ} = −√5 (matches the A4 table row at r = 4).
        let g15 = generalized_gauss(1, 5);
        assert!(g15.eq_exact(&fold_sqrt(5).unwrap().neg()));
        // full q-term sum vs the k ≥ 1 convention
        let part = generalized_gauss_partial(1, 5);
        assert!(generalized_gauss(1, 5).eq_exact(&part.add(&CycScalar::one())));
        // 𝒢(p,1) = 1
        assert!(generalized_gauss(7, 1).eq_exact(&CycScalar::one()));
        // numerical cross-check of 𝒢(3,5) = +√5
        assert!(generalized_gauss(3, 5).eq_exact(&fold_sqrt(5).unwrap()));
    }

    #[test]
    fn supq_examples() {
        assert!(verify_supq(1, 1).unwrap());
        assert!(verify_supq(2, 3).unwrap());
        assert!(verify_supq(3, 5).unwrap());
        // (3,5) and (5,3) together satisfy the r = 14 reciprocity
        let su15_z3 = form_from_name("SU(15)/Z3").unwrap();
        assert!(verify_reciprocity(&su15_z3).unwrap());
    }

    #[test]
    fn legendre_and_reciprocity() {
        // squares mod 5 are {1,4}; mod 3 are {1}
        assert_eq!(legendre(3, 5).unwrap(), -1);
        assert_eq!(legendre(5, 3).unwrap(), -1);
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(0, 7).unwrap(), 0);
        assert!(legendre(2, 9).is_err());
        assert!(verify_quadratic_reciprocity(3, 5).unwrap());
        assert!(verify_quadratic_reciprocity(3, 7).unwrap());
        assert_eq!(legendre(3, 7).unwrap() * legendre(7, 3).unwrap(), -1);
        assert!(verify_quadratic_reciprocity(3, 9).is_err());
        assert!(verify_quadratic_reciprocity(2, 7).is_err());
    }

    #[test]
    fn milgram_root_lattices() {
        for (f, r) in [(Family::A, 2), (Family::E, 8), (Family::D, 7), (Family::A, 12)] {
            let s = rs(f, r);
            assert!(milgram(&Lattice::root_lattice(&s)).unwrap(), "{f}{r}");
        }
        // odd lattice rejected: B2 root lattice has a norm-1 generator
        let b2 = rs(Family::B, 2);
        assert!(milgram(&Lattice::root_lattice(&b2)).is_err());
    }

    #[test]
    fn milgram_rescaled_sublattice() {
        // L = 2Z·α inside A1: generator norm 8, discriminant group of order 8,
        // sum = √8·e^{iπ/4}.
        let a1 = rs(Family::A, 1);
        let basis = QMat::from_int_rows(&[vec![2]]);
        let l = Lattice::new(basis, a1.gram.clone()).unwrap();
        assert!(milgram(&l).unwrap());
        let disc = QuotientGroup::new(&l.dual().unwrap(), &l).unwrap();
        assert_eq!(disc.order(), 8);
        let mut s = CycScalar::zero();
        for i in 0..8 {
            s = s.add(&phase(&disc.norm_frac(i).unwrap()));
        }
        assert!(s.eq_exact(&fold_sqrt(8).unwrap().mul(&phase(&frac(1, 4)))));
    }

    #[test]
    fn gauss_sum_routes_agree() {
        // The coset-norm route and the miniscule-minimal-vector route are
        // independent computations of the same sum.
        for name in ["SU(6)/Z2", "SU(5)", "Spin(12)", "SO(8)", "E6ad", "E7"] {
            let g = form_from_name(name).unwrap();
            let fast = gauss_sum(&g).unwrap();
            let weights = miniscule_weights(&g).unwrap();
            let mut sum = CycScalar::zero();
            for w in &weights {
                sum = sum.add(&phase(&g.rs.norm(w)));
            }
            let slow = RadScalar::inv_sqrt(weights.len() as u64)
                .mul(&RadScalar::from_cyc(sum));
            assert!(fast.eq_exact(&slow), "{name}");
        }
    }

    #[test]
    fn supq_large_rank() {
        // (5,7) goes through SU(35)/Z5; the coset-norm route keeps this cheap.
        assert!(verify_supq(5, 7).unwrap());
    }

    #[test]
    fn center_order_is_an_index_not_a_table() {
        // |Z(G)| computed as [coweight : ℓ] agrees with |M(G)|
        for name in ["SU(12)", "SU(12)/Z4", "Spin(14)", "E6"] {
            let g = form_from_name(name).unwrap();
            assert_eq!(
                miniscule_weights(&g).unwrap().len() as u64,
                g.center_order(),
                "{name}"
            );
        }
    }

    #[test]
    fn mod_pow_small() {
        assert_eq!(mod_pow(2, 10, 1000), 24);
        assert_eq!(mod_pow(3, 3, 13), 1);
        assert!(BigInt::one().is_one());
    }
}
