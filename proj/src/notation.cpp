#include <cctype>
#include <stdexcept>

#include "cmdeg/picard.hpp"

namespace cmdeg {

namespace {

bool simple_token(const LinearForm& f) {
    if (f.is_constant()) return f.c0() >= 0 && f.c0().get_den() == 1;
    int nz = 0;
    for (int i = 1; i < 4; ++i)
        if (f.c[i] != 0) ++nz;
    if (nz != 1 || f.c0() != 0) return false;
    for (int i = 1; i < 4; ++i)
        if (f.c[i] != 0) return f.c[i] == 1;
    return false;
}

std::string items_text(const std::vector<LinearForm>& mults, const std::vector<size_t>& sizes) {
    std::vector<std::string> parts;
    std::vector<bool> bare;
    size_t pos = 0;
    for (size_t g : sizes) {
        if (g == 1) {
            const LinearForm& f = mults[pos];
            parts.push_back(f.str());
            bare.push_back(!simple_token(f));
        } else {
            std::string s = "[";
            for (size_t j = 0; j < g; ++j) s += (j ? ", " : "") + mults[pos + j].str();
            parts.push_back(s + "]");
            bare.push_back(false);
        }
        pos += g;
    }
    std::string out;
    for (size_t i = 0; i < parts.size();) {
        size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        size_t run = j - i;
        if (!out.empty()) out += ", ";
        if (run == 1)
            out += parts[i];
        else
            out += (bare[i] ? "(" + parts[i] + ")" : parts[i]) + "^" + std::to_string(run);
        i = j;
    }
    return out;
}

std::vector<size_t> sizes_of(const DivisorClass& L, const Configuration* c) {
    std::vector<size_t> s;
    if (c && c->size() == L.mults.size()) {
        for (auto& g : c->groups()) s.push_back(g.size());
    } else {
        s.assign(L.mults.size(), 1);
    }
    return s;
}

std::string ascii(const std::string& in) {
    std::string s;
    for (size_t i = 0; i < in.size(); ++i) {
        if (in.compare(i, 3, "\xE2\x88\x92") == 0) {  // unicode minus
            s += '-';
            i += 2;
        } else if (in.compare(i, 2, "\xE2\x84") == 0 && i + 2 < in.size() && in[i + 2] == '\x92') {
            s += 'L';  // script L
            i += 2;
        } else if (in.compare(i, 4, "\xF0\x9D\x92\xAA") == 0) {  // script O
            s += 'O';
            i += 3;
        } else if (in[i] != ' ' && in[i] != '\t' && in[i] != '\n') {
            s += in[i];
        }
    }
    return s;
}

size_t matching(const std::string& s, size_t open) {
    int depth = 0;
    for (size_t i = open; i < s.size(); ++i) {
        if (s[i] == '(' || s[i] == '[') ++depth;
        if (s[i] == ')' || s[i] == ']') {
            if (--depth == 0) return i;
        }
    }
    throw std::invalid_argument("unbalanced brackets in " + s);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(' || ch == '[') ++depth;
        if (ch == ')' || ch == ']') --depth;
        if (ch == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

void parse_items(const std::string& body, ParsedClass& out) {
    if (body.empty()) return;
    for (auto& item : split_top(body, ',')) {
        std::string base = item;
        size_t reps = 1;
        int depth = 0;
        size_t caret = std::string::npos;
        for (size_t i = 0; i < item.size(); ++i) {
            if (item[i] == '(' || item[i] == '[') ++depth;
            if (item[i] == ')' || item[i] == ']') --depth;
            if (item[i] == '^' && depth == 0) caret = i;
        }
        if (caret != std::string::npos) {
            base = item.substr(0, caret);
            reps = std::stoul(item.substr(caret + 1));
        }
        std::vector<LinearForm> group;
        if (!base.empty() && base.front() == '[') {
            if (matching(base, 0) != base.size() - 1) throw std::invalid_argument("bad group " + item);
            for (auto& f : split_top(base.substr(1, base.size() - 2), ','))
                group.push_back(LinearForm::parse(f));
        } else {
            group.push_back(LinearForm::parse(base));
        }
        for (size_t r = 0; r < reps; ++r) {
            for (auto& f : group) out.cls.mults.push_back(f);
            out.group_sizes.push_back(group.size());
        }
    }
}

}  // namespace

std::string print_class(const DivisorClass& L, const std::vector<size_t>& sizes) {
    std::string items = items_text(L.mults, sizes);
    if (L.base.kind == SurfaceKind::P2)
        return "L(" + L.d0.str() + (items.empty() ? "" : "; " + items) + ")";
    std::string head = L.base.k == 0 ? "O(" : "O_" + std::to_string(L.base.k) + "(";
    head += L.d0.str() + ", " + L.d1.str() + ")";
    return items.empty() ? head : head + "(" + items + ")";
}

std::string print_class(const DivisorClass& L, const Configuration* config) {
    return print_class(L, sizes_of(L, config));
}

ParsedClass parse_class(const std::string& text) {
    std::string s = ascii(text);
    ParsedClass out;
    if (s.size() < 3) throw std::invalid_argument("cannot parse class: " + text);
    if (s[0] == 'L' && s[1] == '(') {
        size_t close = matching(s, 1);
        if (close != s.size() - 1) throw std::invalid_argument("trailing text in class: " + text);
        std::string inner = s.substr(2, close - 2);
        auto parts = split_top(inner, ';');
        if (parts.size() > 2) throw std::invalid_argument("too many ';' in " + text);
        out.cls = DivisorClass::p2(LinearForm::parse(parts[0]), {});
        if (parts.size() == 2) parse_items(parts[1], out);
        return out;
    }
    if (s[0] == 'O') {
        int k = 0;
        size_t pos = 1;
        if (s[pos] == '_') {
            size_t j = pos + 1;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            k = std::stoi(s.substr(pos + 1, j - pos - 1));
            pos = j;
        }
        if (s[pos] != '(') throw std::invalid_argument("cannot parse class: " + text);
        size_t close = matching(s, pos);
        auto ef = split_top(s.substr(pos + 1, close - pos - 1), ',');
        if (ef.size() != 2) throw std::invalid_argument("O(e,f) needs two entries: " + text);
        out.cls = DivisorClass::fk(k, LinearForm::parse(ef[0]), LinearForm::parse(ef[1]), {});
        if (close + 1 < s.size()) {
            if (s[close + 1] != '(' || matching(s, close + 1) != s.size() - 1)
                throw std::invalid_argument("bad multiplicity list: " + text);
            parse_items(s.substr(close + 2, s.size() - close - 3), out);
        }
        return out;
    }
    throw std::invalid_argument("cannot parse class: " + text);
}

}  // namespace cmdeg
