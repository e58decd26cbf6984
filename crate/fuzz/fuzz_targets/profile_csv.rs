#![no_main]

use libfuzzer_sys::fuzz_target;
use vfenergy::parse::parse_profile_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((s, f)) = parse_profile_csv(text) {
        assert_eq!(s.len(), f.len());
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
});
