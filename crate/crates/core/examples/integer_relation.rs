//! Integer relations among real numbers with PSLQ.

use pslq_minpoly::relation::find_relation_observed;
use pslq_minpoly::{find_relation, make_context, RelationOutcome, RelationParams};

fn main() {
    let ctx = make_context(60, 10).unwrap();
    let ln = |k: u32| ctx.real(k).ln();

    // 3 log 2 + log 3 = log 24
    let x = vec![ln(2), ln(3), ln(24)];
    let params = RelationParams::new(10, ctx.pow10(-50), &ctx);
    let search = find_relation(&x, &params, &ctx).unwrap();
    if let Some(m) = search.outcome.relation() {
        println!("log 2, log 3, log 24: {m} after {} iterations", search.iterations);
    }

    // pi, e, 1: nothing of height <= 1000, with the norm bound growing as it runs
    let x = vec![ctx.pi(), ctx.real(1).exp(), ctx.real(1)];
    let params = RelationParams::new(1000, ctx.pow10(-50), &ctx);
    let mut steps = 0;
    let search = find_relation_observed(&x, &params, &ctx, &mut |_| steps += 1).unwrap();
    match search.outcome {
        RelationOutcome::Found { relation, .. } => println!("pi, e, 1: {relation}"),
        RelationOutcome::NoRelationWithinHeight { .. } => {
            println!("pi, e, 1: none of height <= 1000 ({steps} reductions)")
        }
        other => println!("pi, e, 1: {other:?}"),
    }
    if let Some(last) = search.lower_bound_trace.last() {
        println!("  any relation has norm > {}", last.to_string_radix(10, Some(6)));
    }
}
