//! Running jobs as the command line front end does, with a persistent cache.

use burnside::job::{run, Command, JobSpec};
use burnside::GroupSpec;

fn main() -> burnside::Result<()> {
    let dir = std::env::temp_dir().join("burnside-example-cache");
    let mut job = JobSpec::new(Command::Kernel);
    job.group = Some(GroupSpec::Named("C6".into()));
    job.cache = Some(dir.clone());
    let cold = run(&job)?;
    let warm = run(&job)?;
    print!("{}", warm.body);
    println!("cache transparent: {}", cold == warm);

    let mut st = JobSpec::new(Command::Selftest);
    st.corpus = Some(vec!["C2".into(), "S3".into()]);
    let out = run(&st)?;
    println!("selftest passed: {}", out.success);
    let _ = std::fs::remove_dir_all(dir);
    Ok(())
}
