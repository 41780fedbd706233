//! Exact checks of the section-counting estimates against computed dimensions.

use gcd_height::ideals::{hilbert_profile, Ideal};
use gcd_height::rr_lab::{check_rr_inequality, lemma_h0, rr_growth_in_m};

fn main() {
    for n in 1..=4 {
        let row: Vec<String> = (1..=6).map(|e| {
            let l = lemma_h0(n, e);
            format!("{}{}", l.lhs, if l.equality() { "=" } else { "" })
        }).collect();
        println!("n={n}: {}", row.join(" "));
    }

    let line = Ideal::parse(4, &["x0", "x1"]).unwrap();
    let profile = hilbert_profile(&line).unwrap();
    let fit = check_rr_inequality(&line, &profile, 10, 5).unwrap();
    println!("growth in r: order {} leading {} predicted {} violation {}", fit.exponent, fit.leading, fit.predicted, fit.violation);
    for row in &fit.rows {
        println!("  r={} L={} predicted={}", row.var, row.computed, row.predicted_term);
    }

    let cubic = Ideal::parse(4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap();
    let fit = rr_growth_in_m(&cubic, 2, 10).unwrap();
    println!("growth in m of S/I^2: degree {} leading {} predicted {}", fit.exponent, fit.leading, fit.predicted);
}
