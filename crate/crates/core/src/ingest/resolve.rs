use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{ClassDecl, ResolveOptions, TypeRef};
use crate::graph::{Dependency, DependencyKind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("no class declarations to resolve")]
    Empty,
    #[error("class `{0}` is declared more than once")]
    DuplicateClass(String),
    #[error("ambiguous import of `{name}` in the file declaring `{class}`: `{first}` and `{second}`")]
    AmbiguousImport { name: String, class: String, first: String, second: String },
}

/// Node list and dependency tuples ready for graph construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Resolved {
    /// Declared classes in declaration order, then kept externals in order
    /// of first use.
    pub class_fqns: Vec<String>,
    /// One tuple per type occurrence, grouped per class by kind.
    pub dependencies: Vec<Dependency>,
}

enum Target {
    Declared(String),
    External(String),
}

struct Resolver<'a> {
    declared: HashSet<&'a str>,
    options: &'a ResolveOptions,
}

impl Resolver<'_> {
    /// Binds a simple name: member types of the class and its enclosing
    /// classes, then single-type imports, then the same package, then
    /// on-demand imports.
    fn simple(&self, decl: &ClassDecl, name: &str) -> Target {
        let members = std::iter::once(&decl.fqn).chain(&decl.enclosing);
        for owner in members {
            let candidate = format!("{owner}.{name}");
            if self.declared.contains(candidate.as_str()) {
                return Target::Declared(candidate);
            }
        }
        if let Some(path) = decl.imports.iter().find(|p| last_segment(p) == name) {
            return if self.declared.contains(path.as_str()) {
                Target::Declared(path.clone())
            } else {
                Target::External(path.clone())
            };
        }
        let same_package = if decl.package.is_empty() { name.to_owned() } else { format!("{}.{name}", decl.package) };
        if self.declared.contains(same_package.as_str()) {
            return Target::Declared(same_package);
        }
        for package in &decl.wildcard_imports {
            let candidate = format!("{package}.{name}");
            if self.declared.contains(candidate.as_str()) {
                return Target::Declared(candidate);
            }
        }
        if self.declared.contains(name) {
            return Target::Declared(name.to_owned());
        }
        Target::External(name.to_owned())
    }

    fn name(&self, decl: &ClassDecl, name: &str) -> Target {
        let Some((head, rest)) = name.split_once('.') else {
            return self.simple(decl, name);
        };
        // `Outer.Inner` with `Outer` bound like a simple name
        if let Target::Declared(owner) = self.simple(decl, head) {
            let candidate = format!("{owner}.{rest}");
            if self.declared.contains(candidate.as_str()) {
                return Target::Declared(candidate);
            }
        }
        if self.declared.contains(name) {
            Target::Declared(name.to_owned())
        } else {
            Target::External(name.to_owned())
        }
    }

    fn emit(&self, decl: &ClassDecl, ty: &TypeRef, kind: DependencyKind, out: &mut Vec<Dependency>, externals: &mut Vec<String>, seen: &mut HashSet<String>) {
        let target = match self.name(decl, &ty.name) {
            Target::Declared(fqn) => Some(fqn),
            Target::External(name) if self.options.keep_external => {
                if seen.insert(name.clone()) {
                    externals.push(name.clone());
                }
                Some(name)
            }
            Target::External(_) => None,
        };
        if let Some(target) = target {
            out.push(Dependency::new(decl.fqn.clone(), target, kind));
        }
        if self.options.include_type_arguments {
            for arg in &ty.args {
                self.emit(decl, arg, kind, out, externals, seen);
            }
        }
    }
}

fn last_segment(path: &str) -> &str {
    path.rsplit('.').next().unwrap_or(path)
}

/// Resolves every type reference of `decls` to a declared class.
///
/// Unresolved names are dropped, or kept as external nodes with
/// `keep_external`. Generic types count as their base type; arguments add
/// dependencies of the same kind only with `include_type_arguments`.
pub fn resolve_dependencies(decls: &[ClassDecl], options: &ResolveOptions) -> Result<Resolved, ResolveError> {
    if decls.is_empty() {
        return Err(ResolveError::Empty);
    }
    let mut declared = HashSet::with_capacity(decls.len());
    for d in decls {
        if !declared.insert(d.fqn.as_str()) {
            return Err(ResolveError::DuplicateClass(d.fqn.clone()));
        }
    }
    for d in decls {
        let mut by_name: HashMap<&str, &String> = HashMap::new();
        for path in &d.imports {
            if let Some(prev) = by_name.insert(last_segment(path), path) {
                if prev != path {
                    return Err(ResolveError::AmbiguousImport {
                        name: last_segment(path).to_owned(),
                        class: d.fqn.clone(),
                        first: prev.clone(),
                        second: path.clone(),
                    });
                }
            }
        }
    }

    let resolver = Resolver { declared, options };
    let mut dependencies = Vec::new();
    let mut externals = Vec::new();
    let mut seen = HashSet::new();
    for d in decls {
        let mut groups: Vec<(&[TypeRef], DependencyKind)> = vec![
            (&d.supertypes, DependencyKind::Inheritance),
            (&d.field_types, DependencyKind::Field),
            (&d.param_types, DependencyKind::Parameter),
        ];
        if options.include_constructors {
            groups.push((&d.constructor_param_types, DependencyKind::Parameter));
        }
        groups.push((&d.return_types, DependencyKind::Return));
        for (types, kind) in groups {
            for ty in types {
                resolver.emit(d, ty, kind, &mut dependencies, &mut externals, &mut seen);
            }
        }
    }
    let class_fqns = decls.iter().map(|d| d.fqn.clone()).chain(externals).collect();
    Ok(Resolved { class_fqns, dependencies })
}
