// Tokenize a few tweets and print each token with its kind and byte span.
//
//     cargo run --example tokenize

use botlex::lexer::{tokenize, TokenKind};
use botlex::lexicon::Lexicons;

pub fn run_example() {
    let lex = Lexicons::bundled();
    let tweets = [
        "@bob check https://t.co/abc :-)",
        "don't stop #now",
        "I can't believe it's 2019 already!!! :D",
        ":-)) double smile",
    ];
    for text in tweets {
        println!("{text}");
        let tokens = tokenize(text, &lex);
        for t in &tokens {
            println!(
                "  {:<12} {:?} [{}, {})",
                t.kind.as_str(),
                t.text,
                t.span.start,
                t.span.end
            );
        }
        // spans always point back into the original text
        assert!(tokens.iter().all(|t| text[t.span.start..t.span.end] == t.text));
    }
    let kinds: Vec<TokenKind> = tokenize("don't stop #now", &lex).into_iter().map(|t| t.kind).collect();
    assert_eq!(kinds, [TokenKind::Contraction, TokenKind::Word, TokenKind::Hashtag]);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
