//! Searching for an auxiliary hypersurface, then verifying it after a JSON round trip.

use gcd_height::auxdiv::{search_certificate, verify_certificate, Certificate};
use gcd_height::ideals::Ideal;

fn main() {
    let cubic = Ideal::parse(4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap();
    let out = search_certificate(&cubic, 0.1, 3, 8).unwrap();
    let cert = &out.certificate;
    println!("m={} r={} slope={} within epsilon: {}", cert.m, cert.r, cert.slope_f64(), out.within_epsilon);
    println!("F = {}", cert.f);

    let json = cert.to_json();
    print!("{json}");
    let back = Certificate::from_json(&json).unwrap();
    println!("verified: {}", verify_certificate(&back).is_valid());

    let mut broken = back.clone();
    broken.f = &broken.f + &gcd_height::polyalgebra::parse_poly("x3^2", 4).unwrap();
    println!("tampered: {:?}", verify_certificate(&broken).diagnostics);
}
