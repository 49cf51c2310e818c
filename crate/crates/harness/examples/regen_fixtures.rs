//! Rewrites the checked-in replay fixtures: `cargo run -p pddlbench-harness --example regen_fixtures`.

#[path = "../tests/common/fixtures.rs"]
mod fixtures;

fn main() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    if root.exists() {
        std::fs::remove_dir_all(&root).expect("clear old fixtures");
    }
    fixtures::build(&root);
    println!("wrote {}", root.display());
}
