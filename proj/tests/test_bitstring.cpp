#include "doctest.h"

#include "queasylab/bitstring.hpp"
#include "queasylab/rng.hpp"

using namespace queasylab;

TEST_CASE("bitstring basics") {
    BitString b = BitString::from_string("10110");
    CHECK(b.size() == 5);
    CHECK(b[0]);
    CHECK_FALSE(b[1]);
    CHECK(b.to_string() == "10110");
    CHECK(b.to_value() == 22);

    BitString c = BitString::from_value(22, 5);
    CHECK(c == b);
    CHECK(BitString::from_value(5, 4).to_string() == "0101");
}

TEST_CASE("bitstring word packing matches bit order") {
    BitString b = BitString::from_string("1101");
    // stream bit i lives at word bit i
    CHECK((b.words()[0] & 0xf) == 0b1011);
    CHECK(BitString::from_word(0b1011, 4) == b);
}

TEST_CASE("hex round trip") {
    BitString b = BitString::from_string("00001111");
    CHECK(b.to_hex() == "0f");
    CHECK(BitString::from_hex("0f") == b);
    // non-multiple-of-4 lengths pad on the right for display
    BitString t = BitString::from_string("101");
    CHECK(t.to_hex() == "a");
    CHECK(BitString::from_hex(t.to_hex(), 3) == t);
}

TEST_CASE("hex round trip across sizes") {
    CounterRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        BitString b;
        std::size_t len = rng.next_below(130);
        for (std::size_t i = 0; i < len; ++i) b.push_back(rng.next_bool(0.5));
        CHECK(BitString::from_hex(b.to_hex(), b.size()) == b);
        CHECK(BitString::from_string(b.to_string()) == b);
    }
}

TEST_CASE("length-then-lex order") {
    auto lt = [](const char* a, const char* b) {
        return BitString::from_string(a).length_lex_less(BitString::from_string(b));
    };
    CHECK(lt("", "0"));
    CHECK(lt("1", "00"));
    CHECK(lt("01", "10"));
    CHECK(lt("00", "01"));
    CHECK_FALSE(lt("10", "10"));
    CHECK_FALSE(lt("10", "01"));
}

TEST_CASE("append crosses word boundaries") {
    BitString a;
    for (int i = 0; i < 70; ++i) a.push_back(i % 3 == 0);
    BitString b = a;
    b.append(a);
    CHECK(b.size() == 140);
    for (std::size_t i = 0; i < 70; ++i) {
        CHECK(b[i] == a[i]);
        CHECK(b[70 + i] == a[i]);
    }
}
