//! Characteristic tables on a four-trace sample and the `F` doubling loop.

use ltlf_learn::bitwise::{
    finally_rounds, first_bits, is_solution, table_of, CharSequence, TableCache,
};
use ltlf_learn::ltl::parse_formula;
use ltlf_learn::trace::{Alphabet, Sample, Trace};

fn main() {
    let ab = Alphabet::new(vec!["a".into(), "b".into()]).unwrap();
    let w = |s| Trace::from_word(s, &ab).unwrap();
    let sample = Sample::new(
        ab.clone(),
        vec![w("aabaa"), w("baaa")],
        vec![w("abab"), w("aab")],
    )
    .unwrap();

    let mut cache = TableCache::new(&sample);
    for text in ["a", "X! a", "a U b", "G(F(a))"] {
        let phi = parse_formula(text, &ab).unwrap();
        let t = table_of(&phi, &mut cache);
        let rows: Vec<String> = t.rows().map(|r| r.to_string()).collect();
        let v = first_bits(&t);
        println!(
            "{text:<8} rows {:<28} vector {}  separates: {}",
            rows.join(" "),
            v.bits(),
            is_solution(&v, &sample)
        );
    }

    // F on a long sequence: or-shift by 1, 2, 4, ... until the shift covers it.
    let s = CharSequence::parse("0000000100000001").unwrap();
    println!("\nF over {s}");
    for (shift, r) in finally_rounds(&s) {
        println!("  shift {shift:>2}: {r}");
    }
}
