//! Composing bisets by the double coset formula, checked against the
//! orbit decomposition of literal sets.

use burnside::{named_group, Engine, Subgroup};

fn main() -> burnside::Result<()> {
    let e = Engine::new();
    let s3 = named_group("S3")?;
    let s = burnside::group::sylow_subgroup(&s3, 2)?;
    let res = e.restriction_element(&s)?;
    let inc = e.inclusion_element(&s)?;
    let g = e.compose(&res, &inc)?;
    println!("[S,id] o [S,incl] = {g}");
    println!("orbit oracle agrees: {}", e.compose_oracle(&res, &inc)? == g);
    println!("augmentation {} = |G:S|", e.orbit_augmentation(&g));

    let id = e.identity(&s3)?;
    let b = e.basis(&s3, &s3)?;
    let x = &b[b.len() / 2];
    println!("{x} o [G,id] = {}", e.compose(x, &id)?);
    let trivial = e.trivial_pair(&Subgroup::trivial(&s3), &s3)?;
    println!("[1,triv] o [1,triv] = {}", e.compose(&trivial, &trivial)?);
    Ok(())
}
