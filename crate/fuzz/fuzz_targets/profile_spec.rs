#![no_main]

use libfuzzer_sys::fuzz_target;
use vfenergy::parse::ProfileSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = s.parse::<ProfileSpec>() {
            assert_eq!(p.to_string().parse::<ProfileSpec>().ok(), Some(p));
        }
    }
});
