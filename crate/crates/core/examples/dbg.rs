use gjms_core::boundary::*;
use gjms_core::zonal::*;
fn main() {
    let geom = SphereGeometry::new(1);
    for p in [1.2, 0.9, 0.7, 0.6, 0.55] {
        let rep = hardy_check(p, geom, 48).unwrap();
        println!("p={p}: lhs={:.8e} rhs={:.8e} deficit={:.4e}", rep.lhs, rep.rhs, rep.deficit);
    }
}
