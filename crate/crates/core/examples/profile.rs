//! Dimension, codimension and degree read off the Hilbert polynomial.

use gcd_height::auxdiv::{bound_coefficient, format_real};
use gcd_height::ideals::{hilbert_profile_with, Ideal, ProfileOptions};

fn main() {
    let cases: [(&str, usize, &[&str]); 5] = [
        ("point in P2", 3, &["x0 - x1", "x1 - x2"]),
        ("conic in P2", 3, &["x0*x2 - x1^2"]),
        ("two points in P2", 3, &["x0^2 + x1^2 - x2^2", "x0 - 2*x1"]),
        ("line in P3", 4, &["x0", "x1"]),
        ("twisted cubic", 4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]),
    ];
    for (name, nvars, gens) in cases {
        let ideal = Ideal::parse(nvars, gens).unwrap();
        let (p, hp) = hilbert_profile_with(&ideal, ProfileOptions::default()).unwrap();
        let coef = bound_coefficient(&p).map_or("n/a".to_string(), format_real);
        println!("{name}: n={} d={} c={} degY={} HP={hp} coefficient={coef}", p.n, p.d, p.c, p.deg_y);
    }
}
