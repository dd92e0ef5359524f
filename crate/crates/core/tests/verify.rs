use cylflow::verify::{verify, Suite};

#[test]
fn suites_pass_and_report() {
    for suite in Suite::ALL {
        let seed = if suite == Suite::AppendixA { 7 } else { 1 };
        let rep = verify(suite, seed).unwrap();
        println!("{}", rep.to_text());
        assert!(rep.passed(), "{}", rep.to_text());
        assert!(
            rep.to_text()
                .lines()
                .filter(|l| l.starts_with("PASS"))
                .count()
                == rep.checks.len()
        );
    }
}

#[test]
fn suite_names_parse() {
    for s in Suite::ALL {
        assert_eq!(Suite::parse(s.name()).unwrap(), s);
    }
    assert!(Suite::parse("spectra").is_err());
}
