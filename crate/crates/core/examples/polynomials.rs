//! Parsing, arithmetic and exact evaluation of homogeneous polynomials.

use gcd_height::polyalgebra::{parse_poly, Rat};
use num_bigint::BigInt;

fn main() {
    let f = parse_poly("x0^2 - 3/2*x1*x2", 3).unwrap();
    let g = parse_poly("x0 + x1", 3).unwrap();
    println!("f = {f}");
    println!("g = {g}");
    println!("f*g = {}", &f * &g);
    println!("f - g^2 = {}", &f - &g.pow(2));
    println!("f homogeneous of degree 2: {}", f.is_homogeneous_of_degree(2));

    let x: Vec<BigInt> = [4, -2, 1].into_iter().map(BigInt::from).collect();
    println!("f(4:-2:1) = {}", f.eval(&x).unwrap());
    println!("integer form of f: {:?}", f.integer_form().terms().len());
    println!("2f = {}", f.scale(&Rat::from_integer(2.into())));

    match parse_poly("x0 + x3", 3) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}
