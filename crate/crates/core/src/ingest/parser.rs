//! Recursive-descent parser for class headers.
//!
//! Accepts an optional `package`, any number of `import`s and one or more
//! class or interface declarations. Only headers matter: method bodies,
//! initializers, annotations, modifiers and `throws` clauses are skipped.

use std::collections::HashSet;

use super::lexer::{tokenize, Tok, Token};
use super::{ClassDecl, ParseError, TypeRef};

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "sealed",
];

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double"];

/// Parses one header source into its class declarations, nested classes
/// flattened as `Outer.Inner`.
pub fn parse_class_headers(source: &str) -> Result<Vec<ClassDecl>, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser { tokens, pos: 0, package: String::new(), imports: Vec::new(), wildcards: Vec::new(), decls: Vec::new() };
    parser.file()?;
    Ok(parser.decls)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    package: String,
    imports: Vec<String>,
    wildcards: Vec<String>,
    decls: Vec<ClassDecl>,
}

/// Declaration context for the members being parsed.
struct Scope<'s> {
    fqn: String,
    simple: String,
    type_vars: HashSet<String>,
    enclosing: Vec<String>,
    outer: Option<&'s Scope<'s>>,
}

impl Scope<'_> {
    fn is_type_var(&self, name: &str) -> bool {
        self.type_vars.contains(name) || self.outer.is_some_and(|o| o.is_type_var(name))
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn advance(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError::new(t.line, t.column, message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.peek() {
            Tok::Ident(w) => format!("`{w}`"),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Ellipsis => "`...`".to_owned(),
            Tok::Literal => "a literal".to_owned(),
            Tok::Eof => "end of input".to_owned(),
        };
        self.error_here(format!("expected {wanted}, found {found}"))
    }

    fn is_punct(&self, c: char) -> bool {
        *self.peek() == Tok::Punct(c)
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn eat_punct(&mut self, c: char) -> bool {
        let hit = self.is_punct(c);
        if hit {
            self.advance();
        }
        hit
    }

    fn eat_word(&mut self, word: &str) -> bool {
        let hit = self.is_word(word);
        if hit {
            self.advance();
        }
        hit
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(w) => {
                self.advance();
                Ok(w)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn qualified_name(&mut self) -> Result<String, ParseError> {
        let mut name = self.ident()?;
        while self.is_punct('.') && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.advance();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    fn file(&mut self) -> Result<(), ParseError> {
        self.skip_annotations()?;
        if self.eat_word("package") {
            self.package = self.qualified_name()?;
            self.expect_punct(';')?;
        }
        while self.eat_word("import") {
            let is_static = self.eat_word("static");
            let path = self.qualified_name()?;
            let wildcard = self.is_punct('.') && *self.peek_at(1) == Tok::Punct('*');
            if wildcard {
                self.advance();
                self.advance();
            }
            self.expect_punct(';')?;
            // static imports bring in members, not types
            if !is_static {
                if wildcard {
                    self.wildcards.push(path);
                } else {
                    self.imports.push(path);
                }
            }
        }
        let mut declared = 0;
        loop {
            if self.eat_punct(';') {
                continue;
            }
            if *self.peek() == Tok::Eof {
                break;
            }
            self.type_decl(None)?;
            declared += 1;
        }
        if declared == 0 {
            return Err(self.unexpected("a class or interface declaration"));
        }
        Ok(())
    }

    fn skip_annotations(&mut self) -> Result<(), ParseError> {
        while self.is_punct('@') && !matches!(self.peek_at(1), Tok::Ident(w) if w == "interface") {
            self.advance();
            self.qualified_name()?;
            if self.is_punct('(') {
                self.skip_balanced('(', ')')?;
            }
        }
        Ok(())
    }

    fn skip_modifiers(&mut self) -> Result<(), ParseError> {
        loop {
            self.skip_annotations()?;
            match self.peek() {
                Tok::Ident(w) if MODIFIERS.contains(&w.as_str()) => {
                    self.advance();
                }
                // non-sealed
                Tok::Ident(w) if w == "non" && *self.peek_at(1) == Tok::Punct('-') => {
                    self.advance();
                    self.advance();
                    self.ident()?;
                }
                _ => return Ok(()),
            }
        }
    }

    /// Skips a bracketed group starting at the current `open` token.
    fn skip_balanced(&mut self, open: char, close: char) -> Result<(), ParseError> {
        let start = self.pos;
        self.expect_punct(open)?;
        let mut depth = 1;
        while depth > 0 {
            match self.advance().tok {
                Tok::Punct(c) if c == open => depth += 1,
                Tok::Punct(c) if c == close => depth -= 1,
                Tok::Eof => {
                    let t = &self.tokens[start];
                    return Err(ParseError::new(t.line, t.column, format!("unclosed `{open}`")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn type_params(&mut self) -> Result<HashSet<String>, ParseError> {
        let mut names = HashSet::new();
        if !self.eat_punct('<') {
            return Ok(names);
        }
        loop {
            self.skip_annotations()?;
            names.insert(self.ident()?);
            if self.eat_word("extends") {
                // bounds are not dependencies
                self.type_ref(None)?;
                while self.eat_punct('&') {
                    self.type_ref(None)?;
                }
            }
            if !self.eat_punct(',') {
                break;
            }
        }
        self.expect_punct('>')?;
        Ok(names)
    }

    fn type_decl(&mut self, outer: Option<&Scope<'_>>) -> Result<(), ParseError> {
        self.skip_modifiers()?;
        let is_interface = if self.eat_word("class") {
            false
        } else if self.eat_word("interface") {
            true
        } else {
            return Err(self.unexpected("`class` or `interface`"));
        };
        let (line, column) = (self.tokens[self.pos].line, self.tokens[self.pos].column);
        let simple = self.ident()?;
        let fqn = match outer {
            Some(o) => format!("{}.{}", o.fqn, simple),
            None if self.package.is_empty() => simple.clone(),
            None => format!("{}.{}", self.package, simple),
        };
        if self.decls.iter().any(|d| d.fqn == fqn) {
            return Err(ParseError::new(line, column, format!("duplicate class `{fqn}`")));
        }
        let enclosing = match outer {
            Some(o) => std::iter::once(o.fqn.clone()).chain(o.enclosing.iter().cloned()).collect(),
            None => Vec::new(),
        };
        let scope = Scope { fqn: fqn.clone(), simple, type_vars: self.type_params()?, enclosing, outer };

        let slot = self.decls.len();
        self.decls.push(ClassDecl {
            fqn,
            package: self.package.clone(),
            is_interface,
            imports: self.imports.clone(),
            wildcard_imports: self.wildcards.clone(),
            enclosing: scope.enclosing.clone(),
            line,
            ..ClassDecl::default()
        });

        let mut supertypes = Vec::new();
        if self.eat_word("extends") {
            supertypes.extend(self.type_list(&scope)?);
        }
        if !is_interface && self.eat_word("implements") {
            supertypes.extend(self.type_list(&scope)?);
        }
        if self.eat_word("permits") {
            self.type_list(&scope)?;
        }
        self.decls[slot].supertypes = supertypes;
        self.expect_punct('{')?;
        self.members(&scope, slot)?;
        Ok(())
    }

    fn type_list(&mut self, scope: &Scope<'_>) -> Result<Vec<TypeRef>, ParseError> {
        let mut out = Vec::new();
        loop {
            out.extend(self.type_ref(Some(scope))?);
            if !self.eat_punct(',') {
                return Ok(out);
            }
        }
    }

    fn members(&mut self, scope: &Scope<'_>, slot: usize) -> Result<(), ParseError> {
        loop {
            if self.eat_punct('}') {
                return Ok(());
            }
            if self.eat_punct(';') {
                continue;
            }
            if *self.peek() == Tok::Eof {
                return Err(self.unexpected("`}`"));
            }
            self.skip_modifiers()?;
            if self.is_word("class") || self.is_word("interface") {
                self.type_decl(Some(scope))?;
                continue;
            }
            if self.is_punct('{') {
                // initializer block
                self.skip_balanced('{', '}')?;
                continue;
            }
            let method_vars = self.type_params()?;
            let member_scope = Scope {
                fqn: scope.fqn.clone(),
                simple: scope.simple.clone(),
                type_vars: method_vars,
                enclosing: Vec::new(),
                outer: Some(scope),
            };
            if self.is_word(&scope.simple) && *self.peek_at(1) == Tok::Punct('(') {
                self.advance();
                let params = self.params(&member_scope)?;
                self.decls[slot].constructor_param_types.extend(params);
                self.method_tail()?;
                continue;
            }
            let returned = if self.eat_word("void") { None } else { self.type_ref(Some(&member_scope))? };
            self.ident()?;
            if self.is_punct('(') {
                let params = self.params(&member_scope)?;
                self.decls[slot].param_types.extend(params);
                self.decls[slot].return_types.extend(returned);
                self.method_tail()?;
            } else {
                self.field_declarators(&returned, slot)?;
            }
        }
    }

    fn params(&mut self, scope: &Scope<'_>) -> Result<Vec<TypeRef>, ParseError> {
        self.expect_punct('(')?;
        let mut out = Vec::new();
        if self.eat_punct(')') {
            return Ok(out);
        }
        loop {
            self.skip_modifiers()?;
            out.extend(self.type_ref(Some(scope))?);
            self.eat_ellipsis();
            self.ident()?;
            self.skip_dims()?;
            if !self.eat_punct(',') {
                break;
            }
        }
        self.expect_punct(')')?;
        Ok(out)
    }

    fn eat_ellipsis(&mut self) -> bool {
        let hit = *self.peek() == Tok::Ellipsis;
        if hit {
            self.advance();
        }
        hit
    }

    /// Array dimensions after a name: `[]` repeated.
    fn skip_dims(&mut self) -> Result<(), ParseError> {
        while self.eat_punct('[') {
            self.expect_punct(']')?;
        }
        Ok(())
    }

    /// Everything after a method's parameter list.
    fn method_tail(&mut self) -> Result<(), ParseError> {
        self.skip_dims()?;
        if self.eat_word("throws") {
            loop {
                self.type_ref(None)?;
                if !self.eat_punct(',') {
                    break;
                }
            }
        }
        if self.eat_word("default") {
            // annotation element default value
            self.skip_expression()?;
        }
        if self.is_punct('{') {
            return self.skip_balanced('{', '}');
        }
        self.expect_punct(';')
    }

    /// Field declarators after the first name; each declarator counts once.
    fn field_declarators(&mut self, ty: &Option<TypeRef>, slot: usize) -> Result<(), ParseError> {
        loop {
            self.skip_dims()?;
            self.decls[slot].field_types.extend(ty.clone());
            if self.eat_punct('=') {
                self.skip_expression()?;
            }
            if self.eat_punct(';') {
                return Ok(());
            }
            self.expect_punct(',')?;
            self.ident()?;
        }
    }

    /// Skips an initializer up to (not including) the `;` that ends the
    /// declaration or a `,` that starts the next declarator.
    fn skip_expression(&mut self) -> Result<(), ParseError> {
        let start = self.pos;
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof => {
                    let t = &self.tokens[start];
                    return Err(ParseError::new(t.line, t.column, "unterminated initializer"));
                }
                Tok::Punct('(' | '[' | '{') => depth += 1,
                Tok::Punct(')' | ']' | '}') => {
                    if depth == 0 {
                        return Err(self.unexpected("`;`"));
                    }
                    depth -= 1;
                }
                Tok::Punct(';') if depth == 0 => return Ok(()),
                Tok::Punct(',') if depth == 0 && self.starts_declarator(1) => return Ok(()),
                _ => {}
            }
            self.advance();
        }
    }

    /// Whether the tokens at `offset` look like `name =`, `name ,`, `name ;`
    /// or `name [`.
    fn starts_declarator(&self, offset: usize) -> bool {
        matches!(self.peek_at(offset), Tok::Ident(_))
            && matches!(self.peek_at(offset + 1), Tok::Punct('=' | ',' | ';' | '['))
    }

    /// Parses a type. Returns `None` for primitives, primitive arrays and
    /// type variables. Array dimensions are dropped.
    fn type_ref(&mut self, scope: Option<&Scope<'_>>) -> Result<Option<TypeRef>, ParseError> {
        self.skip_annotations()?;
        let mut name = self.ident()?;
        let primitive = PRIMITIVES.contains(&name.as_str());
        let mut args = Vec::new();
        if !primitive {
            loop {
                if self.is_punct('<') {
                    args = self.type_args(scope)?;
                }
                if self.is_punct('.') && matches!(self.peek_at(1), Tok::Ident(_)) {
                    self.advance();
                    name.push('.');
                    name.push_str(&self.ident()?);
                } else {
                    break;
                }
            }
        }
        while self.is_punct('[') && *self.peek_at(1) == Tok::Punct(']') {
            self.advance();
            self.advance();
        }
        let is_var = !name.contains('.') && scope.is_some_and(|s| s.is_type_var(&name));
        if primitive || is_var {
            return Ok(None);
        }
        Ok(Some(TypeRef { name, args }))
    }

    fn type_args(&mut self, scope: Option<&Scope<'_>>) -> Result<Vec<TypeRef>, ParseError> {
        self.expect_punct('<')?;
        let mut out = Vec::new();
        // diamond
        if self.eat_punct('>') {
            return Ok(out);
        }
        loop {
            self.skip_annotations()?;
            if self.eat_punct('?') {
                if self.eat_word("extends") || self.eat_word("super") {
                    out.extend(self.type_ref(scope)?);
                }
            } else {
                out.extend(self.type_ref(scope)?);
            }
            if !self.eat_punct(',') {
                break;
            }
        }
        self.expect_punct('>')?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(refs: &[TypeRef]) -> Vec<&str> {
        refs.iter().map(|t| t.name.as_str()).collect()
    }

    #[test]
    fn basic_header() {
        let decls = parse_class_headers("package p; class Foo extends Bar { Baz f; Qux m(Quux x); }").unwrap();
        assert_eq!(decls.len(), 1);
        let d = &decls[0];
        assert_eq!(d.fqn, "p.Foo");
        assert_eq!(d.package, "p");
        assert_eq!(names(&d.supertypes), vec!["Bar"]);
        assert_eq!(names(&d.field_types), vec!["Baz"]);
        assert_eq!(names(&d.param_types), vec!["Quux"]);
        assert_eq!(names(&d.return_types), vec!["Qux"]);
    }

    #[test]
    fn empty_class_without_package() {
        let d = &parse_class_headers("class A {}").unwrap()[0];
        assert_eq!(d.fqn, "A");
        assert_eq!(d.package, "");
        assert!(d.supertypes.is_empty() && d.field_types.is_empty());
        assert!(d.param_types.is_empty() && d.return_types.is_empty());
    }

    #[test]
    fn void_interface_method() {
        let d = &parse_class_headers("package p; interface I { void m(); }").unwrap()[0];
        assert_eq!(d.fqn, "p.I");
        assert!(d.is_interface);
        assert!(d.return_types.is_empty() && d.param_types.is_empty());
    }

    #[test]
    fn generics_arrays_and_primitives() {
        let src = "class G<T> implements Cmp<G<T>>, Ser {
            java.util.Map<String, List<T>> index;
            int[] counts; Foo[][] grid;
            <E extends Bar> E pick(E e, T t, Baz... rest, long n) { return null; }
            G(Qux q) {}
        }";
        let d = &parse_class_headers(src).unwrap()[0];
        assert_eq!(names(&d.supertypes), vec!["Cmp", "Ser"]);
        assert_eq!(names(&d.supertypes[0].args), vec!["G"]);
        assert_eq!(names(&d.field_types), vec!["java.util.Map", "Foo"]);
        assert_eq!(names(&d.field_types[0].args), vec!["String", "List"]);
        assert!(d.field_types[0].args[1].args.is_empty());
        assert_eq!(names(&d.param_types), vec!["Baz"]);
        assert!(d.return_types.is_empty());
        assert_eq!(names(&d.constructor_param_types), vec!["Qux"]);
    }

    #[test]
    fn nested_classes_are_flattened() {
        let src = "package a.b; public class Outer { static class Inner { Outer o; } interface Cb { Inner call(); } Inner i; }";
        let decls = parse_class_headers(src).unwrap();
        let fqns: Vec<_> = decls.iter().map(|d| d.fqn.as_str()).collect();
        assert_eq!(fqns, vec!["a.b.Outer", "a.b.Outer.Inner", "a.b.Outer.Cb"]);
        assert_eq!(decls[1].package, "a.b");
        assert_eq!(decls[1].enclosing, vec!["a.b.Outer"]);
        assert_eq!(names(&decls[0].field_types), vec!["Inner"]);
        assert_eq!(names(&decls[2].return_types), vec!["Inner"]);
    }

    #[test]
    fn bodies_annotations_and_initializers_are_skipped() {
        let src = r#"
            import java.util.*; import static java.lang.Math.max; import x.Y;
            @Deprecated(since = "1")
            public abstract class C extends B implements I {
                private static final Map<A, B> M = new HashMap<A, B>(), N;
                static { init(); }
                @Override public synchronized Ret run(final @NonNull Arg a) throws IOException, E2 {
                    if (a != null) { return new Ret() { }; } return null;
                }
                int x = 1, y = f(2, 3);
            }"#;
        let d = &parse_class_headers(src).unwrap()[0];
        assert_eq!(d.imports, vec!["x.Y"]);
        assert_eq!(d.wildcard_imports, vec!["java.util"]);
        assert_eq!(names(&d.field_types), vec!["Map", "Map"]);
        assert_eq!(names(&d.return_types), vec!["Ret"]);
        assert_eq!(names(&d.param_types), vec!["Arg"]);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_class_headers("package p;\nclass { }").unwrap_err();
        assert_eq!((err.line, err.column), (2, 7));
        let err = parse_class_headers("enum E { A }").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        assert!(parse_class_headers("class A { B b }").is_err());
        assert!(parse_class_headers("package p;").is_err());
        assert!(parse_class_headers("class A { void m() { }").is_err());
    }

    #[test]
    fn duplicate_classes_rejected() {
        let err = parse_class_headers("class A {}\nclass A {}").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("duplicate class `A`"));
    }
}
