#![no_main]
use libfuzzer_sys::fuzz_target;
use wallcross_core::theory::Chamber;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(ch) = s.parse::<Chamber>() {
            let again: Chamber = ch.to_string().parse().expect("display output parses");
            assert_eq!(again.normalized(), ch.normalized());
        }
    }
});
