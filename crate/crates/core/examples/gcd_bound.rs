//! Measures `h_gcd(x; Y) - slope·h(x)` over every point of ℙ² up to a height
//! bound, for `Y = (1:1:1)` and the auxiliary line `x0 = x1`.
//!
//! `cargo run --release --example gcd_bound -- 100`

use gcd_height::auxdiv::Certificate;
use gcd_height::harness::{bound_summary, SampleSpec, DEFAULT_CAP};
use gcd_height::ideals::Ideal;
use gcd_height::polyalgebra::parse_poly;

fn main() {
    let h: u64 = std::env::args().nth(1).map_or(30, |s| s.parse().expect("height bound"));
    let y = Ideal::parse(3, &["x0 - x1", "x1 - x2"]).unwrap();
    let f = parse_poly("x0 - x1", 3).unwrap();
    let cert = Certificate::new(y, 1, 1, f, Some(1.0));

    let start = std::time::Instant::now();
    let s = bound_summary(&cert, &SampleSpec::exhaustive(2, h), DEFAULT_CAP).unwrap();
    println!("H={h}: {} points, {} excluded", s.n_points, s.n_excluded);
    println!("max excess {:.12} at {}", s.max_excess, s.max_excess_point);
    println!("mean excess {:.12}", s.mean_excess);
    println!("max ratio {:?}, above slope+1/2: {}", s.max_ratio, s.n_ratio_above);
    eprintln!("elapsed {:?}", start.elapsed());
}
