//! Coordinate charts: coordinate names plus the declared function and
//! constant symbols that metric expressions may use.

use symexpr::{Atom, Symbol};

/// Constant symbols every chart understands.
pub const BUILTIN_CONSTANTS: [&str; 3] = ["c", "G", "pi"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: Symbol,
    pub args: Vec<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    coordinates: Vec<Symbol>,
    functions: Vec<FunctionDecl>,
    constants: Vec<Symbol>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ChartError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("symbol `{0}` is declared twice")]
    DuplicateName(String),
    #[error("argument `{arg}` of function `{function}` is not a coordinate")]
    UnknownArgument { function: String, arg: String },
}

/// What an identifier refers to in a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symbolic<'a> {
    Coordinate(usize),
    Function(&'a FunctionDecl),
    Constant,
}

impl Chart {
    pub fn new<S: AsRef<str>>(coordinates: &[S]) -> Result<Self, ChartError> {
        let mut chart = Chart {
            coordinates: Vec::new(),
            functions: Vec::new(),
            constants: Vec::new(),
        };
        if coordinates.len() < 2 {
            return Err(ChartError::DimensionTooSmall(coordinates.len()));
        }
        for c in coordinates {
            chart.check_fresh(c.as_ref())?;
            chart.coordinates.push(Symbol::from(c.as_ref()));
        }
        Ok(chart)
    }

    fn check_fresh(&self, name: &str) -> Result<(), ChartError> {
        if self.lookup(name).is_some() && !(BUILTIN_CONSTANTS.contains(&name) && !self.is_declared(name)) {
            return Err(ChartError::DuplicateName(name.to_string()));
        }
        if matches!(name, "sin" | "cos" | "diff") {
            return Err(ChartError::DuplicateName(name.to_string()));
        }
        Ok(())
    }

    fn is_declared(&self, name: &str) -> bool {
        self.coordinates.iter().any(|c| &**c == name)
            || self.functions.iter().any(|f| &*f.name == name)
            || self.constants.iter().any(|c| &**c == name)
    }

    pub fn declare_function<S: AsRef<str>>(&mut self, name: &str, args: &[S]) -> Result<(), ChartError> {
        self.check_fresh(name)?;
        let mut decl_args = Vec::new();
        for a in args {
            let a = a.as_ref();
            if self.coordinate_index(a).is_none() {
                return Err(ChartError::UnknownArgument {
                    function: name.to_string(),
                    arg: a.to_string(),
                });
            }
            if decl_args.iter().any(|d: &Symbol| &**d == a) {
                return Err(ChartError::DuplicateName(a.to_string()));
            }
            decl_args.push(Symbol::from(a));
        }
        self.functions.push(FunctionDecl {
            name: Symbol::from(name),
            args: decl_args,
        });
        Ok(())
    }

    pub fn declare_constant(&mut self, name: &str) -> Result<(), ChartError> {
        if BUILTIN_CONSTANTS.contains(&name) {
            return Ok(());
        }
        self.check_fresh(name)?;
        self.constants.push(Symbol::from(name));
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinates(&self) -> &[Symbol] {
        &self.coordinates
    }

    pub fn coordinate(&self, i: usize) -> &str {
        &self.coordinates[i]
    }

    pub fn coordinate_index(&self, name: &str) -> Option<usize> {
        self.coordinates.iter().position(|c| &**c == name)
    }

    pub fn functions(&self) -> &[FunctionDecl] {
        &self.functions
    }

    pub fn function(&self, name: &str) -> Option<&FunctionDecl> {
        self.functions.iter().find(|f| &*f.name == name)
    }

    pub fn constants(&self) -> &[Symbol] {
        &self.constants
    }

    pub fn lookup(&self, name: &str) -> Option<Symbolic<'_>> {
        if let Some(i) = self.coordinate_index(name) {
            return Some(Symbolic::Coordinate(i));
        }
        if let Some(f) = self.function(name) {
            return Some(Symbolic::Function(f));
        }
        if self.constants.iter().any(|c| &**c == name) || BUILTIN_CONSTANTS.contains(&name) {
            return Some(Symbolic::Constant);
        }
        None
    }

    /// The atom for the undifferentiated function `name`.
    pub fn function_atom(&self, name: &str) -> Option<Atom> {
        self.function(name).map(|f| Atom::function(&f.name, &f.args))
    }
}
