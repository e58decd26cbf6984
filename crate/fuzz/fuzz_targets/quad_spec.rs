#![no_main]

use libfuzzer_sys::fuzz_target;
use vfenergy::parse::QuadSpec;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(q) = s.parse::<QuadSpec>() {
            assert_eq!(q.to_string().parse::<QuadSpec>().ok(), Some(q));
        }
    }
});
