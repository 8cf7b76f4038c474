#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "zkforge/diag.hpp"

namespace zkforge {

enum class Tok {
    kEof,
    kIdent,
    kNumber,
    // keywords
    kTemplate, kComponent, kSignal, kInput, kOutput, kVar,
    kFor, kIf, kElse, kAssert, kMain,
    // punctuation
    kLParen, kRParen, kLBracket, kRBracket, kLBrace, kRBrace,
    kComma, kSemi, kDot, kQuestion, kColon,
    // operators
    kAssign,        // =
    kWeakL,         // <--
    kWeakR,         // -->
    kStrongL,       // <==
    kStrongR,       // ==>
    kConstraintEq,  // ===
    kPlus, kMinus, kStar, kSlash, kBackslash, kPercent, kPow,
    kShl, kShr, kLt, kLe, kGt, kGe, kEq, kNe,
    kAmp, kPipe, kCaret, kAndAnd, kOrOr, kBang,
    kPlusEq, kMinusEq, kStarEq, kPlusPlus,
};

struct Token {
    Tok kind;
    SrcLoc loc;
    std::string text; // identifier text
    mpz_class num;    // number value
};

/* Throws CompileError on malformed input. */
std::vector<Token> lex(const std::string& source, const std::string& file);

} // namespace zkforge
