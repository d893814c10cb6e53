//! Rewrites the linking fixtures under `fixtures/` from their builders.

use std::path::Path;

use fusionkit::transporter::build::{octahedral_linking, sigma4_linking, OCTAHEDRAL_FIXTURE, SIGMA4_FIXTURE};
use fusionkit::Budget;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let budget = Budget::default();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::write(dir.join(SIGMA4_FIXTURE), sigma4_linking(&budget)?.to_json())?;
    std::fs::write(dir.join(OCTAHEDRAL_FIXTURE), octahedral_linking(&budget)?.to_json())?;
    Ok(())
}
