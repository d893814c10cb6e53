//! Corrupted input documents must produce errors, never panics.

use fusionkit::catalog::{self, doc};
use fusionkit::transporter::build::{fixture_text, SIGMA4_FIXTURE};
use fusionkit::transporter::{Transporter, TransporterData};
use fusionkit::Budget;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn corrupted_system_documents_do_not_panic(gen in 0usize..64, slot in 0usize..64, value in 0u32..64) {
        let f = catalog::build("so3:l=2", &Budget::default()).unwrap().system;
        let mut d = doc::to_doc(&f);
        let g = gen % d.generators.len();
        let auts = &mut d.generators[g].automorphisms;
        let row = slot % auts.len();
        let col = slot % auts[row].len();
        auts[row][col] = value;
        let _ = doc::from_doc(&d, &Budget::default());
    }

    #[test]
    fn corrupted_transporter_documents_do_not_panic(which in 0usize..4, index in 0usize..4096, value in 0u32..40) {
        let mut data = TransporterData::from_json(fixture_text(SIGMA4_FIXTURE).unwrap()).unwrap();
        let m = index % data.morphisms.len();
        match which {
            0 => {
                let rho = &mut data.morphisms[m].rho;
                let i = index % rho.len();
                rho[i] = value;
            }
            1 => data.morphisms[m].eps = Some(value),
            2 => data.morphisms[m].source = value as usize % 6,
            _ => {
                let c = index % data.composition.len();
                data.composition[c][index % 3] = value as usize;
            }
        }
        let text = data.to_json();
        if let Ok(t) = Transporter::from_json(&text, &Budget::default()) {
            let _ = fusionkit::transporter::validate_transporter(&t);
        }
    }
}
