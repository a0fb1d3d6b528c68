//! Factor an integer polynomial by recovering minimal polynomials of its
//! real roots.
//!
//!     cargo run --example factor_by_roots [-- "<polynomial>"]

use pslq_minpoly::{factor_primitive, make_context, real_roots, IntPolynomial};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| {
        "3*x^9 - 9*x^8 + 3*x^7 + 6*x^5 - 27*x^4 + 21*x^3 + 30*x^2 - 21*x + 3".into()
    });
    let p: IntPolynomial = text.parse().expect("polynomial");

    let ctx = make_context(30, 10).unwrap();
    println!("real roots of {p}:");
    for r in real_roots(&p, &ctx) {
        println!("  {}", r.to_string_radix(10, Some(15)));
    }

    let result = factor_primitive(&p).expect("nonzero polynomial");
    println!("{result}");
    assert_eq!(result.product(), p);
}
