#![no_main]

use libfuzzer_sys::fuzz_target;
use vfenergy::parse::FieldSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = s.parse::<FieldSpec>() {
        // whatever parses must print back to the same spec
        let again: FieldSpec = spec.to_string().parse().expect("display re-parses");
        assert_eq!(again, spec);
    }
});
