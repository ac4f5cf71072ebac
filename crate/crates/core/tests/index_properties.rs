use std::collections::BTreeSet;

use proptest::prelude::*;
use tetun_core::corpus::synth::{generate, DEFAULT_SEED};
use tetun_core::index::{decode, encode, load_index, save_index};
use tetun_core::{build_index, Document, FieldScheme, InvertedIndex, Lexicons, Preset};

fn vocab(index: &InvertedIndex) -> BTreeSet<String> {
    index.vocabulary().map(String::from).collect()
}

#[test]
fn synthetic_round_trip_and_monotonic_vocabulary() {
    let docs = generate(DEFAULT_SEED).documents;
    let lex = Lexicons::bundled();
    let dir = tempfile::tempdir().unwrap();
    for preset in Preset::ALL {
        let mut vocabs = Vec::new();
        for scheme in FieldScheme::ALL {
            let index = build_index(&docs, scheme, &preset.config(), &lex).unwrap();
            assert_eq!(index.doc_count(), 442);
            index.check_invariants().unwrap();
            let path = dir.path().join(format!("{}_{}.idx", preset.name(), scheme.name()));
            save_index(&index, &path).unwrap();
            assert_eq!(load_index(&path).unwrap(), index);
            vocabs.push(vocab(&index));
        }
        let [t, tc, lc, tlc] = [&vocabs[0], &vocabs[1], &vocabs[2], &vocabs[3]];
        assert!(t.is_subset(tc) && tc.is_subset(tlc) && lc.is_subset(tlc), "{preset:?}");
        assert!(t.len() < tc.len());
    }
}

#[test]
fn build_is_deterministic() {
    let docs = generate(DEFAULT_SEED).documents;
    let lex = Lexicons::bundled();
    let config = Preset::Default.config();
    let a = encode(&build_index(&docs, FieldScheme::TitleLeadContent, &config, &lex).unwrap());
    let b = encode(&build_index(&docs, FieldScheme::TitleLeadContent, &config, &lex).unwrap());
    assert_eq!(a, b);
}

fn doc_strategy() -> impl Strategy<Value = Vec<Document>> {
    let text = "[a-zA-Zñé' <>/-]{0,40}";
    prop::collection::vec((text, text, text), 1..8).prop_map(|fields| {
        fields
            .into_iter()
            .enumerate()
            .map(|(i, (t, l, c))| Document::new(format!("d{i}"), t, l, c))
            .collect()
    })
}

proptest! {
    #[test]
    fn encode_decode_identity(docs in doc_strategy(), scheme in 0usize..4, preset in 0usize..3) {
        let index = build_index(&docs, FieldScheme::ALL[scheme], &Preset::ALL[preset].config(), &Lexicons::bundled()).unwrap();
        prop_assert!(index.check_invariants().is_ok());
        let bytes = encode(&index);
        prop_assert_eq!(decode(&bytes).unwrap(), index);
        for cut in [0, bytes.len() / 3, bytes.len() - 1] {
            prop_assert!(decode(&bytes[..cut]).is_err());
        }
    }

    #[test]
    fn scheme_inclusion(docs in doc_strategy()) {
        let lex = Lexicons::bundled();
        let config = Preset::Default.config();
        let v: Vec<BTreeSet<String>> = FieldScheme::ALL
            .iter()
            .map(|s| vocab(&build_index(&docs, *s, &config, &lex).unwrap()))
            .collect();
        prop_assert!(v[0].is_subset(&v[1]));
        prop_assert!(v[1].is_subset(&v[3]));
        prop_assert!(v[2].is_subset(&v[3]));
    }
}
