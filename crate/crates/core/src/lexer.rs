//! Hand-written single-pass lexer for the Java 8 lexical grammar.
//!
//! The lexer is deliberately grammar-light: it never looks at more than a
//! few characters ahead and accepts any sequence of well-formed tokens, so
//! half-finished student submissions still lex. Comments and whitespace are
//! dropped. Identifiers collapse to [`TokenKind::Ident`] and every literal
//! collapses to its literal category, which makes the resulting sequences
//! insensitive to renaming and constant tweaking.
//!
//! Unicode escapes (`\uXXXX`) are not pre-translated; they are accepted
//! inside string and character literals only.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

macro_rules! token_kinds {
    ($( $variant:ident => $name:literal, $lexeme:literal; )*) => {
        /// Category of a lexical token.
        ///
        /// The vocabulary is closed. Keywords, operators and separators each
        /// have their own kind; identifiers and literal values are abstracted.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(into = "&'static str", try_from = "String")]
        pub enum TokenKind {
            $( $variant, )*
        }

        impl TokenKind {
            /// Every kind, in declaration order.
            pub const ALL: &'static [TokenKind] = &[ $( TokenKind::$variant, )* ];

            /// Stable upper-case identifier, e.g. `KW_INT` or `SEMI`.
            pub fn name(self) -> &'static str {
                match self {
                    $( TokenKind::$variant => $name, )*
                }
            }

            /// A canonical lexeme that lexes back to this kind.
            pub fn canonical_lexeme(self) -> &'static str {
                match self {
                    $( TokenKind::$variant => $lexeme, )*
                }
            }
        }
    };
}

token_kinds! {
    KwAbstract => "KW_ABSTRACT", "abstract";
    KwAssert => "KW_ASSERT", "assert";
    KwBoolean => "KW_BOOLEAN", "boolean";
    KwBreak => "KW_BREAK", "break";
    KwByte => "KW_BYTE", "byte";
    KwCase => "KW_CASE", "case";
    KwCatch => "KW_CATCH", "catch";
    KwChar => "KW_CHAR", "char";
    KwClass => "KW_CLASS", "class";
    KwConst => "KW_CONST", "const";
    KwContinue => "KW_CONTINUE", "continue";
    KwDefault => "KW_DEFAULT", "default";
    KwDo => "KW_DO", "do";
    KwDouble => "KW_DOUBLE", "double";
    KwElse => "KW_ELSE", "else";
    KwEnum => "KW_ENUM", "enum";
    KwExtends => "KW_EXTENDS", "extends";
    KwFinal => "KW_FINAL", "final";
    KwFinally => "KW_FINALLY", "finally";
    KwFloat => "KW_FLOAT", "float";
    KwFor => "KW_FOR", "for";
    KwGoto => "KW_GOTO", "goto";
    KwIf => "KW_IF", "if";
    KwImplements => "KW_IMPLEMENTS", "implements";
    KwImport => "KW_IMPORT", "import";
    KwInstanceof => "KW_INSTANCEOF", "instanceof";
    KwInt => "KW_INT", "int";
    KwInterface => "KW_INTERFACE", "interface";
    KwLong => "KW_LONG", "long";
    KwNative => "KW_NATIVE", "native";
    KwNew => "KW_NEW", "new";
    KwPackage => "KW_PACKAGE", "package";
    KwPrivate => "KW_PRIVATE", "private";
    KwProtected => "KW_PROTECTED", "protected";
    KwPublic => "KW_PUBLIC", "public";
    KwReturn => "KW_RETURN", "return";
    KwShort => "KW_SHORT", "short";
    KwStatic => "KW_STATIC", "static";
    KwStrictfp => "KW_STRICTFP", "strictfp";
    KwSuper => "KW_SUPER", "super";
    KwSwitch => "KW_SWITCH", "switch";
    KwSynchronized => "KW_SYNCHRONIZED", "synchronized";
    KwThis => "KW_THIS", "this";
    KwThrow => "KW_THROW", "throw";
    KwThrows => "KW_THROWS", "throws";
    KwTransient => "KW_TRANSIENT", "transient";
    KwTry => "KW_TRY", "try";
    KwVoid => "KW_VOID", "void";
    KwVolatile => "KW_VOLATILE", "volatile";
    KwWhile => "KW_WHILE", "while";

    Ident => "IDENT", "x";
    IntLit => "INT_LIT", "0";
    FloatLit => "FLOAT_LIT", "0.0";
    StringLit => "STRING_LIT", "\"s\"";
    CharLit => "CHAR_LIT", "'c'";
    BoolLit => "BOOL_LIT", "true";
    NullLit => "NULL_LIT", "null";

    LParen => "LPAREN", "(";
    RParen => "RPAREN", ")";
    LBrace => "LBRACE", "{";
    RBrace => "RBRACE", "}";
    LBracket => "LBRACKET", "[";
    RBracket => "RBRACKET", "]";
    Semi => "SEMI", ";";
    Comma => "COMMA", ",";
    Dot => "DOT", ".";
    Ellipsis => "ELLIPSIS", "...";
    At => "AT", "@";
    ColonColon => "COLON_COLON", "::";

    Assign => "ASSIGN", "=";
    Gt => "GT", ">";
    Lt => "LT", "<";
    Bang => "BANG", "!";
    Tilde => "TILDE", "~";
    Question => "QUESTION", "?";
    Colon => "COLON", ":";
    Arrow => "ARROW", "->";
    EqEq => "EQ", "==";
    Le => "LE", "<=";
    Ge => "GE", ">=";
    Ne => "NE", "!=";
    AndAnd => "AND_AND", "&&";
    OrOr => "OR_OR", "||";
    Inc => "INC", "++";
    Dec => "DEC", "--";
    Plus => "PLUS", "+";
    Minus => "MINUS", "-";
    Star => "STAR", "*";
    Slash => "SLASH", "/";
    Amp => "AMP", "&";
    Bar => "BAR", "|";
    Caret => "CARET", "^";
    Percent => "PERCENT", "%";
    Shl => "SHL", "<<";
    Shr => "SHR", ">>";
    Ushr => "USHR", ">>>";
    PlusAssign => "PLUS_ASSIGN", "+=";
    MinusAssign => "MINUS_ASSIGN", "-=";
    StarAssign => "STAR_ASSIGN", "*=";
    SlashAssign => "SLASH_ASSIGN", "/=";
    AmpAssign => "AMP_ASSIGN", "&=";
    BarAssign => "BAR_ASSIGN", "|=";
    CaretAssign => "CARET_ASSIGN", "^=";
    PercentAssign => "PERCENT_ASSIGN", "%=";
    ShlAssign => "SHL_ASSIGN", "<<=";
    ShrAssign => "SHR_ASSIGN", ">>=";
    UshrAssign => "USHR_ASSIGN", ">>>=";
}

impl TokenKind {
    /// Looks a kind up by its [`TokenKind::name`].
    pub fn from_name(name: &str) -> Option<TokenKind> {
        TokenKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    pub fn is_literal(self) -> bool {
        matches!(
            self,
            TokenKind::IntLit
                | TokenKind::FloatLit
                | TokenKind::StringLit
                | TokenKind::CharLit
                | TokenKind::BoolLit
                | TokenKind::NullLit
        )
    }

    pub fn is_keyword(self) -> bool {
        self.name().starts_with("KW_")
    }

    fn keyword(word: &str) -> Option<TokenKind> {
        let kind = match word {
            "true" | "false" => TokenKind::BoolLit,
            "null" => TokenKind::NullLit,
            _ => {
                return TokenKind::ALL[..50]
                    .iter()
                    .copied()
                    .find(|k| k.canonical_lexeme() == word)
            }
        };
        Some(kind)
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<TokenKind> for &'static str {
    fn from(kind: TokenKind) -> Self {
        kind.name()
    }
}

impl TryFrom<String> for TokenKind {
    type Error = String;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        TokenKind::from_name(&value).ok_or_else(|| format!("unknown token kind `{value}`"))
    }
}

/// The full vocabulary in a fixed order; IR vectors are indexed by it.
pub fn token_vocabulary() -> &'static [TokenKind] {
    TokenKind::ALL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    /// 1-based.
    pub line: u32,
    /// 1-based, counted in chars.
    pub column: u32,
}

/// Comment-free token stream of one submission.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSequence {
    pub submission_id: String,
    pub tokens: Vec<Token>,
}

impl TokenSequence {
    pub fn new(submission_id: impl Into<String>, tokens: Vec<Token>) -> Self {
        TokenSequence {
            submission_id: submission_id.into(),
            tokens,
        }
    }

    /// Builds a sequence from bare kinds, with synthetic positions (one token per column on line 1).
    pub fn from_kinds(submission_id: impl Into<String>, kinds: &[TokenKind]) -> Self {
        let tokens = kinds
            .iter()
            .enumerate()
            .map(|(i, &kind)| Token {
                kind,
                line: 1,
                column: i as u32 + 1,
            })
            .collect();
        TokenSequence::new(submission_id, tokens)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn kinds(&self) -> Vec<TokenKind> {
        self.tokens.iter().map(|t| t.kind).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexErrorKind {
    UnterminatedString,
    UnterminatedComment,
    IllegalCharacter(char),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}:{}: {}", .line, .column, describe(.kind))]
pub struct LexError {
    pub kind: LexErrorKind,
    pub line: u32,
    pub column: u32,
}

fn describe(kind: &LexErrorKind) -> String {
    match kind {
        LexErrorKind::UnterminatedString => "unterminated string or character literal".to_string(),
        LexErrorKind::UnterminatedComment => "unterminated block comment".to_string(),
        LexErrorKind::IllegalCharacter(c) => format!("illegal character {c:?}"),
    }
}

/// Tokenizes `source` with an empty submission id.
pub fn tokenize(source: &str) -> Result<TokenSequence, LexError> {
    tokenize_named("", source)
}

pub fn tokenize_named(submission_id: &str, source: &str) -> Result<TokenSequence, LexError> {
    let tokens = Lexer::new(source).run()?;
    Ok(TokenSequence::new(submission_id, tokens))
}

/// Renders kinds back into compilable-looking Java text.
///
/// Each kind becomes its canonical lexeme; identifiers are numbered so the
/// output stays readable. Lexing the result reproduces `kinds` exactly.
pub fn render_kinds(kinds: &[TokenKind]) -> String {
    let mut out = String::new();
    let mut depth = 0usize;
    let mut at_line_start = true;
    let mut ident = 0usize;
    for &kind in kinds {
        if kind == TokenKind::RBrace {
            depth = depth.saturating_sub(1);
        }
        if at_line_start {
            for _ in 0..depth {
                out.push_str("    ");
            }
        } else {
            out.push(' ');
        }
        if kind == TokenKind::Ident {
            out.push_str(&format!("v{ident}"));
            ident += 1;
        } else {
            out.push_str(kind.canonical_lexeme());
        }
        at_line_start = false;
        match kind {
            TokenKind::LBrace => {
                depth += 1;
                out.push('\n');
                at_line_start = true;
            }
            TokenKind::RBrace | TokenKind::Semi => {
                out.push('\n');
                at_line_start = true;
            }
            _ => {}
        }
    }
    if !at_line_start {
        out.push('\n');
    }
    out
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    column: u32,
}

impl Lexer {
    fn new(source: &str) -> Self {
        Lexer {
            chars: source.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, kind: LexErrorKind, line: u32, column: u32) -> LexError {
        LexError { kind, line, column }
    }

    fn run(mut self) -> Result<Vec<Token>, LexError> {
        let mut tokens = Vec::new();
        while let Some(c) = self.peek(0) {
            let (line, column) = (self.line, self.column);
            if c.is_whitespace() || c == '\u{1a}' {
                self.bump();
                continue;
            }
            if c == '/' && self.peek(1) == Some('/') {
                while let Some(c) = self.peek(0) {
                    if c == '\n' || c == '\r' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            if c == '/' && self.peek(1) == Some('*') {
                self.bump();
                self.bump();
                loop {
                    match self.bump() {
                        Some('*') if self.peek(0) == Some('/') => {
                            self.bump();
                            break;
                        }
                        Some(_) => {}
                        None => return Err(self.error(LexErrorKind::UnterminatedComment, line, column)),
                    }
                }
                continue;
            }
            let kind = if is_ident_start(c) {
                self.identifier()
            } else if c.is_ascii_digit() || (c == '.' && self.peek(1).is_some_and(|d| d.is_ascii_digit())) {
                self.number()
            } else if c == '"' {
                self.quoted('"', line, column)?;
                TokenKind::StringLit
            } else if c == '\'' {
                self.quoted('\'', line, column)?;
                TokenKind::CharLit
            } else {
                match self.operator() {
                    Some(kind) => kind,
                    None => return Err(self.error(LexErrorKind::IllegalCharacter(c), line, column)),
                }
            };
            tokens.push(Token { kind, line, column });
        }
        Ok(tokens)
    }

    fn identifier(&mut self) -> TokenKind {
        let start = self.pos;
        while self.peek(0).is_some_and(is_ident_part) {
            self.bump();
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        TokenKind::keyword(&word).unwrap_or(TokenKind::Ident)
    }

    fn eat_digits(&mut self, radix: u32) {
        while let Some(c) = self.peek(0) {
            if c == '_' || c.is_digit(radix) {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn eat_exponent(&mut self, markers: [char; 2]) -> bool {
        match self.peek(0) {
            Some(c) if markers.contains(&c) => {
                let sign = matches!(self.peek(1), Some('+') | Some('-'));
                let digit_at = if sign { 2 } else { 1 };
                if self.peek(digit_at).is_some_and(|d| d.is_ascii_digit()) {
                    self.bump();
                    if sign {
                        self.bump();
                    }
                    self.eat_digits(10);
                    true
                } else {
                    false
                }
            }
            _ => false,
        }
    }

    /// Integer and floating-point literals, including hex floats and
    /// binary/octal forms. Suffixes decide the category.
    fn number(&mut self) -> TokenKind {
        let mut float = false;
        if self.peek(0) == Some('0') && matches!(self.peek(1), Some('x') | Some('X')) {
            self.bump();
            self.bump();
            self.eat_digits(16);
            if self.peek(0) == Some('.') {
                self.bump();
                self.eat_digits(16);
                float = true;
            }
            if self.eat_exponent(['p', 'P']) {
                float = true;
            }
        } else if self.peek(0) == Some('0') && matches!(self.peek(1), Some('b') | Some('B')) {
            self.bump();
            self.bump();
            self.eat_digits(2);
        } else {
            self.eat_digits(10);
            if self.peek(0) == Some('.') && self.peek(1) != Some('.') {
                self.bump();
                self.eat_digits(10);
                float = true;
            }
            if self.eat_exponent(['e', 'E']) {
                float = true;
            }
        }
        match self.peek(0) {
            Some('l') | Some('L') if !float => {
                self.bump();
                TokenKind::IntLit
            }
            Some('f') | Some('F') | Some('d') | Some('D') => {
                self.bump();
                TokenKind::FloatLit
            }
            _ if float => TokenKind::FloatLit,
            _ => TokenKind::IntLit,
        }
    }

    fn quoted(&mut self, quote: char, line: u32, column: u32) -> Result<(), LexError> {
        self.bump();
        loop {
            match self.peek(0) {
                None | Some('\n') | Some('\r') => {
                    return Err(self.error(LexErrorKind::UnterminatedString, line, column))
                }
                Some('\\') => {
                    self.bump();
                    if matches!(self.peek(0), None | Some('\n') | Some('\r')) {
                        return Err(self.error(LexErrorKind::UnterminatedString, line, column));
                    }
                    self.bump();
                }
                Some(c) if c == quote => {
                    self.bump();
                    return Ok(());
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    fn operator(&mut self) -> Option<TokenKind> {
        use TokenKind::*;
        const TABLE: &[(&str, TokenKind)] = &[
            (">>>=", UshrAssign),
            ("<<=", ShlAssign),
            (">>=", ShrAssign),
            (">>>", Ushr),
            ("...", Ellipsis),
            ("->", Arrow),
            ("::", ColonColon),
            ("==", EqEq),
            ("<=", Le),
            (">=", Ge),
            ("!=", Ne),
            ("&&", AndAnd),
            ("||", OrOr),
            ("++", Inc),
            ("--", Dec),
            ("<<", Shl),
            (">>", Shr),
            ("+=", PlusAssign),
            ("-=", MinusAssign),
            ("*=", StarAssign),
            ("/=", SlashAssign),
            ("&=", AmpAssign),
            ("|=", BarAssign),
            ("^=", CaretAssign),
            ("%=", PercentAssign),
            ("(", LParen),
            (")", RParen),
            ("{", LBrace),
            ("}", RBrace),
            ("[", LBracket),
            ("]", RBracket),
            (";", Semi),
            (",", Comma),
            (".", Dot),
            ("@", At),
            ("=", Assign),
            (">", Gt),
            ("<", Lt),
            ("!", Bang),
            ("~", Tilde),
            ("?", Question),
            (":", Colon),
            ("+", Plus),
            ("-", Minus),
            ("*", Star),
            ("/", Slash),
            ("&", Amp),
            ("|", Bar),
            ("^", Caret),
            ("%", Percent),
        ];
        // longest match first; the table is ordered by lexeme length
        for &(lexeme, kind) in TABLE {
            let matches = lexeme.chars().enumerate().all(|(i, c)| self.peek(i) == Some(c));
            if matches {
                for _ in 0..lexeme.len() {
                    self.bump();
                }
                return Some(kind);
            }
        }
        None
    }
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_ident_part(c: char) -> bool {
    is_ident_start(c) || c.is_alphanumeric()
}
