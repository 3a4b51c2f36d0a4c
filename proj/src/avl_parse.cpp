#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "wrapframe/avl.hpp"

namespace wrapframe {

// ------------------------------------------------------------------ lexer

namespace {

struct Token {
    enum class T {
        label,    // @x ?x $X (text includes the sigil)
        attr,     // ALL-CAPS identifier
        ident,    // any other identifier
        keyword,  // TOP INWR WR IN
        dot,
        colon,
        comma,
        amp,
        pipe,
        bang,
        lparen,
        rparen,
        lbracket,
        rbracket,
        hash,
        eqeq,
        end,
    };
    T t = T::end;
    std::string text;
    int line = 0;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool all_caps(const std::string& s) {
    if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0])))
        return false;
    for (char c : s)
        if (std::islower(static_cast<unsigned char>(c))) return false;
    return true;
}

bool keyword_text(const std::string& s) {
    return s == "TOP" || s == "INWR" || s == "WR" || s == "IN";
}

[[noreturn]] void lex_fail(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1;
    size_t i = 0;
    auto push = [&](Token::T t, std::string s) {
        out.push_back({t, std::move(s), line});
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line, ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (c == '@' || c == '?' || c == '$') {
            size_t j = i + 1;
            while (j < text.size() && ident_char(text[j])) ++j;
            if (j == i + 1)
                lex_fail(line, std::string("dangling '") + c + "'");
            push(Token::T::label, text.substr(i, j - i));
            i = j;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            std::string word = text.substr(i, j - i);
            if (keyword_text(word))
                push(Token::T::keyword, word);
            else if (all_caps(word))
                push(Token::T::attr, word);
            else
                push(Token::T::ident, word);
            i = j;
            continue;
        }
        switch (c) {
            case '.': push(Token::T::dot, "."); break;
            case ':': push(Token::T::colon, ":"); break;
            case ',': push(Token::T::comma, ","); break;
            case '&': push(Token::T::amp, "&"); break;
            case '|': push(Token::T::pipe, "|"); break;
            case '!': push(Token::T::bang, "!"); break;
            case '(': push(Token::T::lparen, "("); break;
            case ')': push(Token::T::rparen, ")"); break;
            case '[': push(Token::T::lbracket, "["); break;
            case ']': push(Token::T::rbracket, "]"); break;
            case '#': push(Token::T::hash, "#"); break;
            case '=':
                if (i + 1 >= text.size() || text[i + 1] != '=')
                    lex_fail(line, "single '='; path equations use '=='");
                push(Token::T::eqeq, "==");
                ++i;
                break;
            default:
                lex_fail(line, std::string("unexpected character '") + c + "'");
        }
        ++i;
    }
    out.push_back({Token::T::end, "", line});
    return out;
}

// ----------------------------------------------------------------- parser

struct Parser {
    std::vector<Token> toks;
    size_t pos = 0;

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    bool at(Token::T t, size_t ahead = 0) const { return peek(ahead).t == t; }
    Token eat() { return toks[pos++]; }
    Token expect(Token::T t, const std::string& what) {
        if (!at(t))
            fail("expected " + what + ", got '" + peek().text + "'");
        return eat();
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("line " + std::to_string(peek().line) + ": " + what);
    }

    // ---- shared pieces

    Formula::Term labelpath() {
        Token l = expect(Token::T::label, "a label");
        Path p;
        while (at(Token::T::dot) && at(Token::T::attr, 1)) {
            eat();
            p.push_back(eat().text);
        }
        return {l.text, std::move(p)};
    }

    std::vector<Formula::Term> arg_list() {
        expect(Token::T::lparen, "'('");
        std::vector<Formula::Term> args;
        args.push_back(labelpath());
        while (at(Token::T::comma)) {
            eat();
            args.push_back(labelpath());
        }
        expect(Token::T::rparen, "')'");
        return args;
    }

    // ---- descriptions

    Description dformula() {
        std::vector<Description> alts{dconj()};
        while (at(Token::T::pipe)) {
            eat();
            alts.push_back(dconj());
        }
        return dor(std::move(alts));
    }

    Description dconj() {
        std::vector<Description> kids{datom()};
        while (at(Token::T::amp)) {
            eat();
            kids.push_back(datom());
        }
        return dand(std::move(kids));
    }

    Description datom() {
        if (at(Token::T::attr)) {
            Token a = eat();
            expect(Token::T::colon, "':' after attribute '" + a.text + "'");
            return dattr(a.text, datom());
        }
        if (at(Token::T::keyword) && peek().text == "TOP") {
            eat();
            return dtop();
        }
        if (at(Token::T::hash)) {
            eat();
            return dlabel(expect(Token::T::label, "a label after '#'").text);
        }
        if (at(Token::T::label)) return dlabel(eat().text);
        if (at(Token::T::ident)) return dtype(eat().text);
        if (at(Token::T::lparen)) {
            eat();
            Description d = dformula();
            expect(Token::T::rparen, "')'");
            return d;
        }
        fail("expected a description, got '" + peek().text + "'");
    }

    static Description fold_attrs(const Path& p, Description d) {
        for (auto it = p.rbegin(); it != p.rend(); ++it)
            d = dattr(*it, std::move(d));
        return d;
    }

    // ---- formulas

    Formula formula() {
        std::vector<Formula> kids{term()};
        while (at(Token::T::amp)) {
            eat();
            kids.push_back(term());
        }
        return fand(std::move(kids));
    }

    Formula term() {
        if (at(Token::T::bang)) {
            eat();
            return fnot(term());
        }
        if (at(Token::T::lparen)) {
            eat();
            Formula f = formula();
            expect(Token::T::rparen, "')'");
            return f;
        }
        if (at(Token::T::keyword)) {
            if (peek().text == "TOP") {
                eat();
                return ftop();
            }
            fail("'" + peek().text + "' is an atom form, not a formula");
        }
        if ((at(Token::T::ident) || at(Token::T::attr)) &&
            at(Token::T::lparen, 1)) {
            Token name = eat();
            return frel(name.text, arg_list());
        }
        if (at(Token::T::label)) {
            // wrapping content: $T:[?x . ...]
            if (at(Token::T::colon, 1) && at(Token::T::lbracket, 2)) {
                Token wvar = eat();
                if (label_sort(wvar.text) != LabelSort::wrap_var)
                    fail("'" + wvar.text +
                         "' opens wrapping content but is not a $-variable");
                eat();  // :
                eat();  // [
                Token nvar = expect(Token::T::label, "a member label");
                if (label_sort(nvar.text) == LabelSort::wrap_var)
                    fail("wrapping member '" + nvar.text +
                         "' cannot be a $-variable");
                expect(Token::T::dot, "'.'");
                Description d = dformula();
                expect(Token::T::rbracket, "']'");
                return fwrap(wvar.text, nvar.text, d);
            }
            auto [label, path] = labelpath();
            if (at(Token::T::eqeq)) {
                eat();
                return fpath_eq({label, path}, labelpath());
            }
            if (at(Token::T::colon)) {
                eat();
                return fat(label, fold_attrs(path, datom()));
            }
            if (at(Token::T::dot)) {
                eat();
                return fat(label, fold_attrs(path, datom()));
            }
            return fat(label, fold_attrs(path, dtop()));
        }
        fail("expected a formula, got '" + peek().text + "'");
    }

    // ---- atoms

    Atom atom() {
        if (at(Token::T::keyword)) {
            Token kw = eat();
            if (kw.text == "TOP") fail("'TOP' is not an atom");
            expect(Token::T::lparen, "'('");
            Token first = expect(Token::T::label, "a label");
            if (kw.text == "IN") {
                expect(Token::T::comma, "','");
                Token wvar = expect(Token::T::label, "a wrapping label");
                expect(Token::T::rparen, "')'");
                return ain(first.text, wvar.text);
            }
            expect(Token::T::rparen, "')'");
            return kw.text == "INWR" ? ainwr(first.text) : awr(first.text);
        }
        if ((at(Token::T::ident) || at(Token::T::attr)) &&
            at(Token::T::lparen, 1)) {
            Token name = eat();
            return arel(name.text, arg_list());
        }
        auto lhs = labelpath();
        if (at(Token::T::eqeq)) {
            eat();
            return apath_eq(lhs, labelpath());
        }
        expect(Token::T::colon, "':' or '=='");
        if (at(Token::T::keyword) && peek().text == "TOP") {
            eat();
            return apath_top(lhs.first, lhs.second);
        }
        Token type = expect(Token::T::ident, "a type or TOP");
        return apath_type(lhs.first, lhs.second, type.text);
    }
};

// --------------------------------------------------------------- preamble

// Declaration lines ahead of the formula:
//   types: dog cat      attrs: AGENT THEME      rels: scope/2 r/2
struct SplitSource {
    Signature declared;
    std::string body;
};

SplitSource split_preamble(const std::string& text) {
    SplitSource out;
    std::istringstream in(text);
    std::string line;
    std::ostringstream rest;
    bool in_preamble = true;
    while (std::getline(in, line)) {
        if (in_preamble) {
            std::string trimmed = line.substr(line.find_first_not_of(" \t") ==
                                                      std::string::npos
                                                  ? line.size()
                                                  : line.find_first_not_of(" \t"));
            if (trimmed.empty() || trimmed.rfind("//", 0) == 0) {
                rest << '\n';
                continue;
            }
            auto heads = {"types:", "attrs:", "rels:"};
            std::string head;
            for (const char* h : heads)
                if (trimmed.rfind(h, 0) == 0) head = h;
            if (head.empty()) {
                in_preamble = false;
                rest << line << '\n';
                continue;
            }
            std::istringstream items(trimmed.substr(head.size()));
            std::string item;
            while (items >> item) {
                while (!item.empty() && item.back() == ',') item.pop_back();
                if (item.empty()) continue;
                if (head == "types:") {
                    out.declared.types.insert(item);
                } else if (head == "attrs:") {
                    if (!all_caps(item))
                        throw ParseError("declared attribute '" + item +
                                         "' must be ALL-CAPS");
                    out.declared.attributes.insert(item);
                } else {
                    auto slash = item.find('/');
                    if (slash == std::string::npos)
                        throw ParseError("relation declaration '" + item +
                                         "' needs the form name/arity");
                    std::string name = item.substr(0, slash);
                    int arity = 0;
                    try {
                        arity = std::stoi(item.substr(slash + 1));
                    } catch (const std::exception&) {
                        throw ParseError("bad arity in '" + item + "'");
                    }
                    if (name.empty() || arity <= 0)
                        throw ParseError("bad relation declaration '" + item +
                                         "'");
                    auto [it, fresh] = out.declared.relations.emplace(name, arity);
                    if (!fresh && it->second != arity)
                        throw ParseError("relation '" + name +
                                         "' declared with two arities");
                }
            }
            rest << '\n';  // keep line numbers aligned
            continue;
        }
        rest << line << '\n';
    }
    out.body = rest.str();
    return out;
}

}  // namespace

// ------------------------------------------------------------ entry points

ParsedFormula parse_source(const std::string& text) {
    SplitSource split = split_preamble(text);
    Parser p{tokenize(split.body)};
    ParsedFormula out;
    out.formula = p.formula();
    if (!p.at(Token::T::end))
        p.fail("trailing input after formula: '" + p.peek().text + "'");
    out.signature = split.declared;
    out.signature.merge(signature_of(out.formula));
    return out;
}

Formula parse_formula(const std::string& text) {
    return parse_source(text).formula;
}

Atom parse_atom(const std::string& text) {
    Parser p{tokenize(text)};
    Atom a = p.atom();
    if (!p.at(Token::T::end))
        p.fail("trailing input after atom: '" + p.peek().text + "'");
    return a;
}

// ---------------------------------------------------------------- printing

namespace {

std::string term_str(const Formula::Term& t) {
    if (t.second.empty()) return t.first;
    return t.first + "." + path_to_string(t.second);
}

// parent context decides parenthesisation: conj binds tighter than disj
std::string desc_str(const Description& d, bool tight) {
    switch (d.kind) {
        case Description::Kind::top:
            return "TOP";
        case Description::Kind::type:
            return d.text;
        case Description::Kind::label:
            return "#" + d.text;
        case Description::Kind::attr: {
            const Description& sub = d.kids.front();
            bool wrap = sub.kind == Description::Kind::conj ||
                        sub.kind == Description::Kind::disj;
            std::string body = desc_str(sub, false);
            return d.text + ":" + (wrap ? "(" + body + ")" : body);
        }
        case Description::Kind::conj: {
            std::string out;
            for (const auto& k : d.kids) {
                if (!out.empty()) out += " & ";
                out += desc_str(k, true);
            }
            return out;
        }
        case Description::Kind::disj: {
            std::string out;
            for (const auto& k : d.kids) {
                if (!out.empty()) out += " | ";
                out += desc_str(k, true);
            }
            return tight ? "(" + out + ")" : out;
        }
    }
    return {};
}

}  // namespace

std::string to_string(const Description& d) { return desc_str(d, false); }

std::string to_string(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::top:
            return "TOP";
        case Formula::Kind::at: {
            bool wrap = f.desc.kind == Description::Kind::conj ||
                        f.desc.kind == Description::Kind::disj;
            std::string body = desc_str(f.desc, false);
            return f.label + " . " + (wrap ? "(" + body + ")" : body);
        }
        case Formula::Kind::wrap:
            return f.label + ":[" + f.nvar + " . " + desc_str(f.desc, false) +
                   "]";
        case Formula::Kind::path_eq:
            return term_str(f.lhs) + " == " + term_str(f.rhs);
        case Formula::Kind::rel: {
            std::string out = f.rel_name + "(";
            for (size_t i = 0; i < f.rel_args.size(); ++i) {
                if (i) out += ", ";
                out += term_str(f.rel_args[i]);
            }
            return out + ")";
        }
        case Formula::Kind::conj: {
            std::string out;
            for (const auto& k : f.kids) {
                if (!out.empty()) out += " & ";
                bool wrap = k.kind == Formula::Kind::conj;
                out += wrap ? "(" + to_string(k) + ")" : to_string(k);
            }
            return out;
        }
        case Formula::Kind::neg:
            return "!(" + to_string(f.kids.front()) + ")";
    }
    return {};
}

std::string to_string(const Atom& a) {
    switch (a.kind) {
        case Atom::Kind::path_top:
            return term_str(a.terms[0]) + ":TOP";
        case Atom::Kind::path_type:
            return term_str(a.terms[0]) + ":" + a.name;
        case Atom::Kind::path_eq:
            return term_str(a.terms[0]) + " == " + term_str(a.terms[1]);
        case Atom::Kind::rel: {
            std::string out = a.name + "(";
            for (size_t i = 0; i < a.terms.size(); ++i) {
                if (i) out += ", ";
                out += term_str(a.terms[i]);
            }
            return out + ")";
        }
        case Atom::Kind::inwr:
            return "INWR(" + a.terms[0].first + ")";
        case Atom::Kind::in:
            return "IN(" + a.terms[0].first + ", " + a.terms[1].first + ")";
        case Atom::Kind::wr:
            return "WR(" + a.terms[0].first + ")";
    }
    return {};
}

std::string to_string(const Clause& c) {
    auto side = [](const std::set<Atom>& atoms, const char* empty) {
        if (atoms.empty()) return std::string(empty);
        std::string out;
        for (const auto& a : atoms) {
            if (!out.empty()) out += ", ";
            out += to_string(a);
        }
        return out;
    };
    return side(c.premises, "true") + " => " + side(c.conclusions, "false");
}

}  // namespace wrapframe
