//! The p-local idempotents 1_p and the prime decomposition of an element.

use burnside::report::PLocalDoc;
use burnside::{named_group, Engine, FiniteGroup};

fn main() -> burnside::Result<()> {
    let e = Engine::new();
    for (name, p) in [("S3", 2), ("S3", 3), ("A4", 2), ("A4", 3)] {
        let g = named_group(name)?;
        let one = e.one_p(&g, p)?;
        println!("1_{p}({name}) = {}", one.element);
        for c in &one.coefficients {
            let doc = PLocalDoc::new(c, 8);
            println!("    {}/{}  = ...{} mod {p}^8", doc.num, doc.den, doc.residue);
        }
    }
    let c6 = named_group("C6")?;
    let space = e.space(&c6, &FiniteGroup::trivial())?;
    let x = burnside::BurnsideElement::basis(&space, 0);
    for part in e.decompose(&x)? {
        println!("pi_{}({x}) = {}", part.prime, part.projection);
    }
    Ok(())
}
