#include "zkforge/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace zkforge {

namespace {

const std::unordered_map<std::string, Tok>& keywords() {
    static const std::unordered_map<std::string, Tok> kw = {
        {"template", Tok::kTemplate}, {"component", Tok::kComponent},
        {"signal", Tok::kSignal},     {"input", Tok::kInput},
        {"output", Tok::kOutput},     {"var", Tok::kVar},
        {"for", Tok::kFor},           {"if", Tok::kIf},
        {"else", Tok::kElse},         {"assert", Tok::kAssert},
        {"main", Tok::kMain},
    };
    return kw;
}

} // namespace

std::vector<Token> lex(const std::string& src, const std::string& file) {
    std::vector<Token> out;
    size_t i = 0;
    int line = 1, col = 1;

    auto loc = [&]() { return SrcLoc{line, col}; };
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto peek = [&](size_t k) -> char { return i + k < src.size() ? src[i + k] : '\0'; };
    auto push = [&](Tok t, SrcLoc l) { out.push_back({t, l, "", 0}); };

    while (i < src.size()) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && peek(1) == '/') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && peek(1) == '*') {
            SrcLoc start = loc();
            advance(2);
            while (i < src.size() && !(src[i] == '*' && peek(1) == '/')) advance(1);
            if (i >= src.size()) throw CompileError(file, start, "unterminated block comment");
            advance(2);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            SrcLoc l = loc();
            size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string word = src.substr(i, j - i);
            advance(j - i);
            auto it = keywords().find(word);
            if (it != keywords().end()) {
                push(it->second, l);
            } else {
                out.push_back({Tok::kIdent, l, word, 0});
            }
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            SrcLoc l = loc();
            size_t j = i;
            int base = 10;
            if (c == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
                base = 16;
                j += 2;
                while (j < src.size() && std::isxdigit(static_cast<unsigned char>(src[j]))) ++j;
                if (j == i + 2) throw CompileError(file, l, "malformed hex literal");
            } else {
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            std::string digits = base == 16 ? src.substr(i + 2, j - i - 2) : src.substr(i, j - i);
            advance(j - i);
            Token t{Tok::kNumber, l, "", mpz_class(digits, base)};
            out.push_back(std::move(t));
            continue;
        }

        SrcLoc l = loc();
        auto two = [&](char a, char b) { return c == a && peek(1) == b; };
        // three-character operators first
        if (c == '<' && peek(1) == '=' && peek(2) == '=') { push(Tok::kStrongL, l); advance(3); continue; }
        if (c == '<' && peek(1) == '-' && peek(2) == '-') { push(Tok::kWeakL, l); advance(3); continue; }
        if (c == '=' && peek(1) == '=' && peek(2) == '=') { push(Tok::kConstraintEq, l); advance(3); continue; }
        if (c == '=' && peek(1) == '=' && peek(2) == '>') { push(Tok::kStrongR, l); advance(3); continue; }
        if (c == '-' && peek(1) == '-' && peek(2) == '>') { push(Tok::kWeakR, l); advance(3); continue; }
        // two-character
        if (two('<', '<')) { push(Tok::kShl, l); advance(2); continue; }
        if (two('<', '=')) { push(Tok::kLe, l); advance(2); continue; }
        if (two('>', '>')) { push(Tok::kShr, l); advance(2); continue; }
        if (two('>', '=')) { push(Tok::kGe, l); advance(2); continue; }
        if (two('=', '=')) { push(Tok::kEq, l); advance(2); continue; }
        if (two('!', '=')) { push(Tok::kNe, l); advance(2); continue; }
        if (two('&', '&')) { push(Tok::kAndAnd, l); advance(2); continue; }
        if (two('|', '|')) { push(Tok::kOrOr, l); advance(2); continue; }
        if (two('*', '*')) { push(Tok::kPow, l); advance(2); continue; }
        if (two('+', '=')) { push(Tok::kPlusEq, l); advance(2); continue; }
        if (two('-', '=')) { push(Tok::kMinusEq, l); advance(2); continue; }
        if (two('*', '=')) { push(Tok::kStarEq, l); advance(2); continue; }
        if (two('+', '+')) { push(Tok::kPlusPlus, l); advance(2); continue; }
        // single-character
        Tok t;
        switch (c) {
            case '(': t = Tok::kLParen; break;
            case ')': t = Tok::kRParen; break;
            case '[': t = Tok::kLBracket; break;
            case ']': t = Tok::kRBracket; break;
            case '{': t = Tok::kLBrace; break;
            case '}': t = Tok::kRBrace; break;
            case ',': t = Tok::kComma; break;
            case ';': t = Tok::kSemi; break;
            case '.': t = Tok::kDot; break;
            case '?': t = Tok::kQuestion; break;
            case ':': t = Tok::kColon; break;
            case '=': t = Tok::kAssign; break;
            case '+': t = Tok::kPlus; break;
            case '-': t = Tok::kMinus; break;
            case '*': t = Tok::kStar; break;
            case '/': t = Tok::kSlash; break;
            case '\\': t = Tok::kBackslash; break;
            case '%': t = Tok::kPercent; break;
            case '<': t = Tok::kLt; break;
            case '>': t = Tok::kGt; break;
            case '&': t = Tok::kAmp; break;
            case '|': t = Tok::kPipe; break;
            case '^': t = Tok::kCaret; break;
            case '!': t = Tok::kBang; break;
            default:
                throw CompileError(file, l, std::string("unexpected character '") + c + "'");
        }
        push(t, l);
        advance(1);
    }
    out.push_back({Tok::kEof, loc(), "", 0});
    return out;
}

} // namespace zkforge
