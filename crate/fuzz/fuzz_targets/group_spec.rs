#![no_main]

use libfuzzer_sys::fuzz_target;
use vfenergy::parse::{group_to_string, parse_group_spec};

fuzz_target!(|data: &[u8]| {
    let Some((&d, rest)) = data.split_first() else { return };
    let dim = 1 + (d % 8) as usize;
    let Ok(s) = std::str::from_utf8(rest) else { return };
    if let Ok(g) = parse_group_spec(s, dim) {
        if let Some(text) = group_to_string(&g) {
            let again = parse_group_spec(&text, dim).expect("canonical form re-parses");
            assert_eq!(group_to_string(&again).as_deref(), Some(text.as_str()));
        }
    }
});
