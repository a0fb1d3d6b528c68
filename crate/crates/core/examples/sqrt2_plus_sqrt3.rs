//! The quartic x^4 - 10x^2 + 1 from 15 digits of sqrt(2) + sqrt(3), and what
//! happens when the input is too short.

use pslq_minpoly::minpoly::reconstruct_decimal;
use pslq_minpoly::{digits_required, make_context};
use rug::Integer;

fn main() {
    let digits = digits_required(4, &Integer::from(10));
    println!("degree 4, height 10 needs {digits} correct digits");

    let ctx = make_context(40, 10).unwrap();
    let exact = ctx.sqrt(&ctx.real(2)) + ctx.sqrt(&ctx.real(3));
    println!("sqrt(2) + sqrt(3) = {}", exact.to_string_radix(10, Some(30)));

    for value in ["3.14626436994198", "3.146264"] {
        let report = reconstruct_decimal(value, 4, 10).unwrap();
        match report.polynomial() {
            Some(p) => println!("{value:>18} -> {p}"),
            None => println!("{value:>18} -> nothing ({} iterations)", report.iterations),
        }
    }
}
