#ifndef TREELOGIC_ERRORS_HPP
#define TREELOGIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace treelogic {

// Base class for all solver-facing errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& msg, int line, int col)
        : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
          line(line), col(col) {}
    int line;
    int col;
};

class CycleError : public Error {
public:
    using Error::Error;
};

class UnboundVariable : public Error {
public:
    using Error::Error;
};

class UnexpandedPredicate : public Error {
public:
    using Error::Error;
};

class UnknownPredicate : public Error {
public:
    using Error::Error;
};

class UnsupportedPredicate : public Error {
public:
    using Error::Error;
};

class ArityError : public Error {
public:
    using Error::Error;
};

class XPathSyntaxError : public Error {
public:
    XPathSyntaxError(const std::string& msg, int pos)
        : Error(msg + " at offset " + std::to_string(pos)), pos(pos) {}
    int pos;
};

class UnsupportedAxis : public Error {
public:
    using Error::Error;
};

class DtdSyntaxError : public Error {
public:
    using Error::Error;
};

class UndeclaredElement : public Error {
public:
    using Error::Error;
};

class UnknownStartSymbol : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace treelogic

#endif
