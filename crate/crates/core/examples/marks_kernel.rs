//! Tables of marks and the kernel of the prime-power marks.

use burnside::{named_group, Engine, FiniteGroup, MarkVariant};

fn main() -> burnside::Result<()> {
    let e = Engine::new();
    let one = FiniteGroup::trivial();
    for name in ["C6", "S3", "A4"] {
        let g = named_group(name)?;
        let space = e.space(&g, &one)?;
        let table = e.marks_table(&space)?;
        println!("raw marks of A({name}, 1):");
        for row in table.get(MarkVariant::Raw) {
            println!("  {row:?}");
        }
        let report = e.kernel_of_alpha(&g, &one)?;
        for v in &report.kernel_basis {
            println!("  kernel generator: {v}");
        }
    }
    let d8 = named_group("D8")?;
    let r = e.kernel_of_alpha(&d8, &named_group("C2")?)?;
    println!("kernel rank of A(D8, C2): {}", r.rank);
    Ok(())
}
