use rank3_core::groebner::{buchberger, BuchbergerOpts};
use rank3_core::monomial::{PolyRing, Var};
use rank3_core::mumford::RelationFamily;
use rank3_core::poly::Poly;
use rank3_core::rat::Rat;

fn main() {
    // g=1, k=0, m=1, N=3, d'=1, primal. Identity derived from the
    // rearranged recursion:
    // -(2/3) b2^2 z0 = 12 z4 + 3 a2 z3 + 3 a3 z2 + 4 b2 z2  (mod b2^3, b3)
    let fam = RelationFamily::compute(1, 0, 3, 1, false, 4).unwrap();
    let ring = PolyRing::rank(3);
    let a2 = Poly::<Rat>::var(ring.clone(), Var::Alpha(2)).unwrap();
    let a3 = Poly::<Rat>::var(ring.clone(), Var::Alpha(3)).unwrap();
    let b2 = Poly::<Rat>::var(ring.clone(), Var::Beta(2)).unwrap();

    let lhs = b2.pow(2).mul(&fam.value(0)).scale(&Rat::new(-2, 3));
    let rhs = fam
        .value(4)
        .scale(&Rat::from_int(12))
        .add(&a2.mul(&fam.value(3)).scale(&Rat::from_int(3)))
        .add(&a3.mul(&fam.value(2)).scale(&Rat::from_int(3)))
        .add(&b2.mul(&fam.value(2)).scale(&Rat::from_int(4)));
    let diff = lhs.sub(&rhs);
    // kill b3, reduce mod b2^3
    let diff = diff.set_var_zero(Var::Beta(3)).unwrap();
    println!("diff mod b3 = {diff}");
    let gb = buchberger(&[b2.pow(3)], BuchbergerOpts::default()).unwrap();
    println!("diff mod (b3, b2^3) = {}", gb.reduce(&diff));

    for m in 2..=4 {
        println!("z{} = {}", m, fam.value(m));
    }
}
