//! Decide whether sin, cos or exp of a decimal is algebraic of small degree.

use pslq_minpoly::arith::parse_decimal;
use pslq_minpoly::identify::{identify_form, FormKind, TranscendentalForm};
use rug::Integer;

fn main() {
    let cases = [
        // sin(pi/6) = 1/2
        (FormKind::Arcsin, "0.52359877559829887307710723054658381", 2, 4),
        // cos(pi/4) = 1/sqrt(2)
        (FormKind::Arccos, "0.78539816339744830961566084581987572", 2, 4),
        // exp(log(1 + sqrt(2)))
        (FormKind::Log, "0.88137358701954302523260932497979230", 2, 4),
        // sin(1) is transcendental
        (FormKind::Arcsin, "1.0", 2, 4),
    ];
    for (kind, beta, n, h) in cases {
        let form = TranscendentalForm::new(kind, parse_decimal(beta).unwrap(), n, Integer::from(h));
        let alpha = form.alpha_approx().unwrap();
        let report = identify_form(&form).unwrap();
        let answer = report
            .polynomial()
            .map_or_else(|| "no polynomial".to_string(), ToString::to_string);
        println!("{kind}: alpha = {:.20}  ->  {answer}", alpha.to_f64());
    }
}
