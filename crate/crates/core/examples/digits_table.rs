//! Decimal digits needed to pin down an algebraic number of degree n and
//! height N.

use pslq_minpoly::{digits_required, epsilon_bound, make_context};
use rug::Integer;

fn main() {
    let ctx = make_context(60, 10).unwrap();
    println!("{:>3} {:>4} {:>12} {:>7}", "n", "N", "epsilon", "digits");
    for (n, h) in [(2, 10), (2, 47), (4, 10), (4, 13), (7, 17), (10, 15), (15, 100), (23, 9)] {
        let height = Integer::from(h);
        let eps = epsilon_bound(n, &height, &ctx);
        println!(
            "{n:>3} {h:>4} {:>12} {:>7}",
            eps.to_string_radix(10, Some(3)),
            digits_required(n, &height)
        );
    }
}
