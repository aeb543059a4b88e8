#include "symdyn/rng.hpp"

#include <doctest.h>

#include <array>
#include <cstdint>

using namespace symdyn::rng;

// Published known-answer vectors for the ten-round Philox4x32 block cipher
// (Salmon et al., SC'11 reference implementation test vectors).
TEST_CASE("philox4x32-10 known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;

    const A4 zeros = Philox4x32::block({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(zeros == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

    const A4 ones = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                      {0xffffffffu, 0xffffffffu});
    CHECK(ones == A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

    const A4 pi = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                    A2{0xa4093822u, 0x299f31d0u});
    CHECK(pi == A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("stream addressing is an explicit counter layout") {
    const Stream s(0x0123456789abcdefull, 7u);
    const auto direct = Philox4x32::block({5u, 0u, 3u, 7u}, {0x89abcdefu, 0x01234567u});
    CHECK(s.block(5, 3) == direct);

    // raw64 splits one block into two draws, low half first
    const auto b = s.block(9, 0);
    CHECK(s.raw64(9, 0) == (std::uint64_t(b[1]) << 32 | b[0]));
    CHECK(s.raw64(9, 1) == (std::uint64_t(b[3]) << 32 | b[2]));
}

TEST_CASE("uniforms live in the half-open unit interval") {
    CHECK(uniform_from_bits(0) == 0.0);
    CHECK(uniform_from_bits(~0ull) < 1.0);
    const Stream s(2024, 0);
    for (std::uint32_t d = 0; d < 100; ++d) {
        const double u = s.uniform(1, d);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("sequential view matches random access") {
    const Stream s(99, 4);
    TrialRng seq(s, 12);
    for (std::uint32_t d = 0; d < 9; ++d) CHECK(seq() == s.uniform(12, d));
}

TEST_CASE("streams and trials decorrelate") {
    const Stream a(1, 0), b(1, 1), c(2, 0);
    CHECK(a.raw64(0, 0) != b.raw64(0, 0));
    CHECK(a.raw64(0, 0) != c.raw64(0, 0));
    CHECK(a.raw64(0, 0) != a.raw64(1, 0));
}
