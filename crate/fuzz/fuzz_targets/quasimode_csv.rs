#![no_main]
use cavitylab::quasimodes::{read_quasimode_csv, write_quasimode_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(modes) = read_quasimode_csv(text) {
        let mut out = Vec::new();
        write_quasimode_csv(&mut out, &modes).expect("in-memory write");
        let again = read_quasimode_csv(std::str::from_utf8(&out).unwrap()).expect("written file re-reads");
        assert_eq!(modes, again);
    }
});
