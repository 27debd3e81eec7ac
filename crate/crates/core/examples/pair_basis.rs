//! Subgroup lattices and the pair basis of A(G, K).

use burnside::{named_group, Engine};

fn main() -> burnside::Result<()> {
    let e = Engine::new();
    let s3 = named_group("S3")?;
    let c2 = named_group("C2")?;
    println!("{} has {} subgroups", s3.label(), e.subgroups(&s3)?.len());
    let space = e.space(&s3, &c2)?;
    println!("A({}, {}) has {} basis classes:", s3.label(), c2.label(), space.len());
    for c in space.classes() {
        let kind = if c.has_trivial_map() { "trivial" } else { "nontrivial" };
        println!("  [{}]  |H| = {}, {kind} map", c.class_id, c.order());
    }
    Ok(())
}
