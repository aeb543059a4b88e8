#pragma once

#include "symdyn/maps.hpp"

#include <string>
#include <vector>

namespace symdyn {

// Symbols are 1-indexed: word entries lie in 1..k for the associated map.
using Word = std::vector<int>;

std::string word_to_string(const Word& u); // comma-joined, e.g. "1,2,1"
Word word_from_string(const std::string& text);

struct ItineraryResult {
    bool ok = false;
    Word word;               // complete on success, truncated at the hit otherwise
    long boundary_step = -1; // first orbit index landing on a partition point
};

// Length-n coding word of x; fails when any of the first n orbit points sits
// on a partition point.
ItineraryResult itinerary(const PiecewiseMonotoneMap& map, const Scalar& x, long n);

struct CylinderResult {
    Word word;
    Interval interval; // realizing open interval; meaningful when !empty
    bool empty = true;
};

// Pulls the word's branch-domain chain back through the branch inverses.
// An empty interval encodes inadmissibility.
CylinderResult cylinder_interval(const PiecewiseMonotoneMap& map, const Word& u);

// True iff the cylinder is nonempty (width above 10x tolerance in approx mode).
bool is_admissible(const PiecewiseMonotoneMap& map, const Word& u);

// All admissible words of length n in lexicographic order. Throws
// resource_error when n exceeds the cap or the output would exceed
// max_words entries.
std::vector<Word> enumerate_words(const PiecewiseMonotoneMap& map, int n,
                                  int cap = 24, long max_words = 10'000'000);

} // namespace symdyn
