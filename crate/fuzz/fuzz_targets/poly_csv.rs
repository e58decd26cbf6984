#![no_main]

use libfuzzer_sys::fuzz_target;
use vfenergy::parse::parse_poly_csv;
use vfenergy::SphereModel;

fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else { return };
    let model = SphereModel::new(2 + (d % 3) as usize, 1.0).unwrap();
    if let Ok(text) = std::str::from_utf8(rest) {
        let _ = parse_poly_csv(text, model);
    }
});
