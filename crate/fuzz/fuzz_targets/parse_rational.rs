#![no_main]
use libfuzzer_sys::fuzz_target;
use wallcross_core::rational::{format_q, parse_q};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(x) = parse_q(s) {
            assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
        }
    }
});
