//! Exhaustive and seeded random sampling of rational points of bounded height.

use gcd_height::harness::{exhaustive_count, sample_points, SampleSpec};

fn main() {
    for h in [1, 2, 5, 10, 100] {
        println!("P2, H={h}: {} points", exhaustive_count(2, h));
    }
    let all = sample_points(&SampleSpec::exhaustive(1, 3)).unwrap();
    println!("P1, H=3: {}", all.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));

    let spec = SampleSpec::random(3, 1000, 5, 42);
    for x in sample_points(&spec).unwrap() {
        println!("{x}");
    }
}
