//! Graded slices, powers and membership for the ideal of the twisted cubic.

use gcd_height::ideals::{membership, Ideal};
use gcd_height::polyalgebra::parse_poly;

fn main() {
    let cubic = Ideal::parse(4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap();
    println!("Groebner basis:");
    for g in cubic.groebner() {
        println!("  {g}");
    }
    for m in 0..=5 {
        println!("m={m}: dim I_m = {}, dim (S/I)_m = {}", cubic.graded_piece_dim(m), cubic.quotient_dim(m));
    }

    let sq = cubic.power(2);
    println!("I^2 has {} generators", sq.generators().len());
    for m in 3..=6 {
        println!("m={m}: dim (I^2)_m = {}", sq.graded_piece_dim(m));
    }

    let f = parse_poly("(x0*x2 - x1^2)*(x1*x3 - x2^2)", 4).unwrap();
    println!("{f} in I^2: {}", membership(&f, &sq));
    let g = parse_poly("x0*x2 - x1^2", 4).unwrap();
    println!("{g} in I^2: {}", membership(&g, &sq));
}
