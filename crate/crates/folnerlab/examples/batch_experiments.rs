//! The batch experiment runner behind the `folnerlab` binary, driven
//! programmatically: list the catalog, run one experiment with its default
//! config, and demonstrate that reruns are byte-identical regardless of the
//! worker pool size.

use folnerlab::experiment::{catalog, default_config, run};

fn main() -> folnerlab::Result<()> {
    println!("catalog:");
    for e in catalog() {
        println!("  {:<16} {}", e.name, e.description);
    }

    let cfg = default_config("folner-check")?;
    let dir = std::env::temp_dir().join("folnerlab-demo");
    let paths = run(&cfg, &dir)?;
    println!("\nran `folner-check`, wrote:");
    let mut first = Vec::new();
    for p in &paths {
        println!("  {}", p.display());
        first = std::fs::read(p)?;
    }

    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let paths = pool.install(|| run(&cfg, &dir))?;
    let second = std::fs::read(&paths[0])?;
    println!(
        "rerun with a 4-thread pool is byte-identical: {}",
        first == second
    );

    let preview: String = String::from_utf8_lossy(&first).lines().take(8).collect::<Vec<_>>().join("\n");
    println!("\nfirst lines of the artifact:\n{preview}");
    Ok(())
}
