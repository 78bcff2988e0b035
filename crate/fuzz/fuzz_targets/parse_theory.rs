#![no_main]
use libfuzzer_sys::fuzz_target;
use wallcross_core::invariants::Engine;
use wallcross_core::theory::Theory;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(theory) = Theory::from_json_str(s) else { return };
    // serialization must round-trip
    let again = Theory::from_json(&theory.to_json()).expect("serialized theory parses");
    assert_eq!(again, theory);
    // validation must not panic, whatever the numbers
    if theory.rank_cap <= 3 && theory.genus <= 4 {
        let _ = Engine::validate(&theory);
    }
});
