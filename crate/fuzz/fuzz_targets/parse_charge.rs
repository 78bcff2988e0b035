#![no_main]
use libfuzzer_sys::fuzz_target;
use wallcross_core::lattice::Charge;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(c) = s.parse::<Charge>() {
            assert!(c.rank() >= 1);
            let printed = format!("{},{}", c.rank(), c.degree());
            assert_eq!(printed.parse::<Charge>().unwrap(), c);
        }
    }
});
