use cyqw::mckay::{degree_zero_part, mckay_algebra, McKayInput};
use cyqw::repthy::build_model;
use std::time::Instant;

fn main() {
    let input = McKayInput::new(3, vec![1, 1, 1]).unwrap();
    let b = mckay_algebra(&input).unwrap();
    let a = degree_zero_part(&b).unwrap();
    let t = Instant::now();
    let model = build_model(&a, 12).unwrap();
    eprintln!("build_model: {:?}", t.elapsed());
    for iters in 1..=3 {
        let t = Instant::now();
        let rep = model.serre_inverse_iterates(2, iters).unwrap();
        eprintln!(
            "iterates {}: {:?} concentrated={} totals={:?}",
            iters,
            t.elapsed(),
            rep.concentrated,
            rep.steps
                .iter()
                .map(|s| s.homology.iter().map(|h| h.total).sum::<u64>())
                .collect::<Vec<_>>()
        );
    }
}
