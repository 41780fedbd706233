//! Weil and gcd heights of rational points relative to a subscheme.

use gcd_height::heights::{factorize, gcd_height, normalize_point, weil_height, ProjPoint};
use gcd_height::ideals::Ideal;
use gcd_height::polyalgebra::Rat;

fn main() {
    let y = Ideal::parse(3, &["x0 - x1", "x1 - x2"]).unwrap();
    for raw in [[1, 1, 1], [13, 1, 7], [121, 1, 61], [2, 3, 5]] {
        let x = ProjPoint::from_integers(&raw).unwrap();
        let h = gcd_height(&x, &y).unwrap();
        println!(
            "{x}: h={:.6} finite={:.6} arch={:.6} gcd={} vanishing={}",
            h.weil, h.gcd_finite, h.gcd_arch, h.common_divisor, h.vanishing
        );
    }

    let q = normalize_point(&[Rat::new(1.into(), 2.into()), Rat::new((-1).into(), 3.into()), Rat::from_integer(1.into())]).unwrap();
    println!("(1/2 : -1/3 : 1) = {q}, h = {:.6}", weil_height(&q));
    println!("factor 600851475143 = {:?}", factorize(&600851475143u64.into()));
}
