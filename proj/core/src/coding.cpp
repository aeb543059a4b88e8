#include "symdyn/coding.hpp"

#include "symdyn/errors.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace symdyn {

std::string word_to_string(const Word& u) {
    std::string out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(u[i]);
    }
    return out;
}

Word word_from_string(const std::string& text) {
    Word u;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        int sym;
        try {
            sym = std::stoi(item, &pos);
        } catch (const std::exception&) {
            throw std::domain_error("bad word '" + text + "'");
        }
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size()) throw std::domain_error("bad word '" + text + "'");
        u.push_back(sym);
    }
    if (u.empty()) throw std::domain_error("empty word");
    return u;
}

namespace {

void check_symbols(const PiecewiseMonotoneMap& map, const Word& u) {
    if (u.empty()) throw std::domain_error("empty word");
    for (int s : u)
        if (s < 1 || s > map.k)
            throw std::domain_error("symbol " + std::to_string(s) + " outside 1.." +
                                    std::to_string(map.k));
}

} // namespace

ItineraryResult itinerary(const PiecewiseMonotoneMap& map, const Scalar& x0, long n) {
    if (n < 1) throw std::domain_error("itinerary length must be positive");
    ScopedPrecision prec(map.policy.precision_bits);
    ItineraryResult out;
    Scalar x = x0;
    for (long i = 0; i < n; ++i) {
        if (map.on_breakpoint(x)) {
            out.boundary_step = i;
            return out;
        }
        const EvalResult e = map.eval(x);
        out.word.push_back(e.branch + 1);
        x = e.value;
    }
    out.ok = true;
    return out;
}

CylinderResult cylinder_interval(const PiecewiseMonotoneMap& map, const Word& u) {
    check_symbols(map, u);
    ScopedPrecision prec(map.policy.precision_bits);
    CylinderResult out;
    out.word = u;
    Interval c = map.branches[u.back() - 1].domain;
    for (std::size_t i = u.size() - 1; i-- > 0;) {
        c = map.branches[u[i] - 1].pull_back(c);
        if (iv_empty(c, map.policy)) break;
    }
    out.interval = c;
    out.empty = iv_empty(c, map.policy);
    return out;
}

bool is_admissible(const PiecewiseMonotoneMap& map, const Word& u) {
    return !cylinder_interval(map, u).empty;
}

std::vector<Word> enumerate_words(const PiecewiseMonotoneMap& map, int n, int cap,
                                  long max_words) {
    if (n < 1) throw std::domain_error("word length must be positive");
    if (n > cap)
        throw resource_error("word length " + std::to_string(n) + " exceeds cap " +
                             std::to_string(cap));
    ScopedPrecision prec(map.policy.precision_bits);
    std::vector<Word> out;
    Word u;
    // DFS state: image = T^{|u|-1}(cylinder(u)) and the accumulated slope
    // product, so the final cylinder width is image width / product.
    Scalar one = map.policy.is_exact() ? Scalar(Rational(1)) : Scalar(BigFloat(1));
    auto admissible_leaf = [&](const Interval& image, const Scalar& expansion) {
        if (map.policy.is_exact()) return !(image.hi <= image.lo);
        return iv_width(image).to_bigfloat() / expansion.to_bigfloat() >
               BigFloat(10.0 * map.policy.tolerance);
    };
    auto dfs = [&](auto&& self, const Interval& image, const Scalar& expansion) -> void {
        if (long(u.size()) == long(n)) {
            if (admissible_leaf(image, expansion)) {
                if (long(out.size()) >= max_words)
                    throw resource_error("word enumeration exceeds " +
                                         std::to_string(max_words) + " entries");
                out.push_back(u);
            }
            return;
        }
        const Branch& br = map.branches[u.back() - 1];
        const Interval j = br.image_of(image);
        const Scalar grown = expansion * abs(br.slope);
        for (int l = 1; l <= map.k; ++l) {
            const Interval next = iv_intersect(j, map.branches[l - 1].domain);
            if (iv_empty(next, map.policy)) continue;
            u.push_back(l);
            self(self, next, grown);
            u.pop_back();
        }
    };
    for (int l = 1; l <= map.k; ++l) {
        u.push_back(l);
        dfs(dfs, map.branches[l - 1].domain, one);
        u.pop_back();
    }
    return out;
}

} // namespace symdyn
