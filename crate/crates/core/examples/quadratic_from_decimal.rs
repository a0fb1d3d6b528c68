//! Recover an integer quadratic from ten significant digits.
//!
//!     cargo run --example quadratic_from_decimal [-- <value> <degree> <height>]

use pslq_minpoly::minpoly::reconstruct_decimal;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let value = args.first().map_or("11.937253933", String::as_str);
    let degree = args.get(1).map_or(2, |s| s.parse().expect("degree"));
    let height: u32 = args.get(2).map_or(50, |s| s.parse().expect("height"));

    let report = reconstruct_decimal(value, degree, height).expect("valid input");
    println!("{report}");
    for a in &report.attempts {
        println!("  degree {}: {} ({} of {} iterations)", a.degree, a.result, a.iterations, a.iteration_cap);
    }
}
