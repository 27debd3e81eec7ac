//! Subconjugacy filtrations of A(S, K) and the basis [P_i, phi_i] o [G].

use burnside::{named_group, Engine, FiniteGroup};

fn main() -> burnside::Result<()> {
    let e = Engine::new();
    let a4 = named_group("A4")?;
    for k in [FiniteGroup::trivial(), named_group("C2")?] {
        let gag = e.gag_basis(&a4, 2, &k)?;
        let sp = &gag.spairs;
        println!("A4, p = 2, K = {}: Sylow of order {}", k.label(), sp.sylow.order());
        for (node, x) in sp.poset.nodes.iter().zip(&gag.elements) {
            let anchor = &sp.space.class(node.representative).canonical;
            let below = e.filtration_module(&sp.space, anchor, false, &a4)?;
            println!("  node {:?}: below {}, image {x}", node.members, below.members.len());
        }
        println!("  rank {}", gag.rank);
    }
    Ok(())
}
