#include "vanetmon/messages.hpp"

#include "doctest.h"
#include "vanetmon/random.hpp"

using namespace vanetmon;

namespace {

DataPacket random_data_packet(Rng& rng, int threshold) {
  DataPacket p;
  p.v_id = rng.uppercase_alnum(8);
  p.ds = rng.random_bytes(rng.uniform(0, 80));
  p.event = rng.uniform(0, 1) ? Event::NonCongested : Event::Congested;
  p.vel_mph100 = static_cast<std::int32_t>(rng.uniform(0, 7000));
  p.gps_mm = static_cast<std::int64_t>(rng.uniform(0, 8'000'000));
  for (int i = 0; i < threshold; ++i)
    p.enc_ids.push_back(rng.random_bits(1 + static_cast<unsigned>(rng.uniform(1, 300))));
  const int rsus = 1 + static_cast<int>(rng.uniform(0, 4));
  for (int i = 0; i < rsus; ++i) p.trajectory.push_back("RSU" + std::to_string(i + 1));
  return p;
}

EncryptedDataPacket random_encrypted(Rng& rng) {
  return EncryptedDataPacket{rng.random_bits(200),
                             rng.random_bytes(rng.uniform(1, 200))};
}

}  // namespace

TEST_CASE("data packet round trip with threshold enc_ids") {
  Rng rng(3);
  const DataPacket p = random_data_packet(rng, 3);
  CHECK(deserialize_data_packet(serialize_data_packet(p)) == p);
}

TEST_CASE("canonical encoding: serialize(deserialize(b)) == b") {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const Bytes b = serialize_data_packet(random_data_packet(rng, 2));
    CHECK(serialize_data_packet(deserialize_data_packet(b)) == b);
  }
}

TEST_CASE("randomized round trips for every message type") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    switch (i % 7) {
      case 0: {
        const auto m = random_data_packet(rng, 1 + static_cast<int>(rng.uniform(0, 4)));
        CHECK(deserialize_data_packet(serialize_data_packet(m)) == m);
        break;
      }
      case 1: {
        const auto m = random_encrypted(rng);
        CHECK(deserialize_encrypted_data_packet(serialize_encrypted_data_packet(m)) ==
              m);
        break;
      }
      case 2: {
        AggregatePacket m;
        m.rsu_id = "RSU" + std::to_string(rng.uniform(1, 9));
        m.location_mm = static_cast<std::int64_t>(rng.uniform(0, 5'000'000));
        const int count = 1 + static_cast<int>(rng.uniform(0, 2));
        for (int k = 0; k < count; ++k) m.packets.push_back(random_encrypted(rng));
        CHECK(deserialize_aggregate_packet(serialize_aggregate_packet(m)) == m);
        break;
      }
      case 3: {
        ChallengePacket m;
        m.entries[0] = ChallengeEntry{rng.uppercase_alnum(8), {"RSU1", "RSU2"},
                                      static_cast<std::int32_t>(rng.uniform(0, 300))};
        m.entries[1] = ChallengeEntry{rng.uppercase_alnum(8), {"RSU3"},
                                      static_cast<std::int32_t>(rng.uniform(0, 300))};
        if (m.entries[0].cv == m.entries[1].cv) m.entries[1].cv += "X";
        CHECK(deserialize_challenge_packet(serialize_challenge_packet(m)) == m);
        break;
      }
      case 4: {
        const VehicleSearch m{"RSU2", rng.uppercase_alnum(8),
                              rng.uniform(0, 1) ? SearchResponse::NotReceived
                                                : SearchResponse::Received};
        CHECK(deserialize_vehicle_search(serialize_vehicle_search(m)) == m);
        break;
      }
      case 5: {
        const CryptoChallengeFrame m{"RSU1", rng.random_bytes(8)};
        CHECK(deserialize_crypto_challenge(serialize_crypto_challenge(m)) == m);
        break;
      }
      default: {
        const CryptoResponseFrame m{rng.random_bytes(8)};
        CHECK(deserialize_crypto_response(serialize_crypto_response(m)) == m);
        break;
      }
    }
  }
}

TEST_CASE("decode errors carry distinct kinds") {
  Rng rng(11);
  const Bytes good = serialize_data_packet(random_data_packet(rng, 2));

  SUBCASE("truncation") {
    const Bytes cut(good.begin(), good.begin() + good.size() / 2);
    try {
      deserialize_data_packet(cut);
      FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
      CHECK(e.kind() == DecodeError::Kind::Truncated);
    }
  }
  SUBCASE("length overflow") {
    Bytes bad = good;
    bad[1] = 0xff;  // v_id length now absurd
    bad[2] = 0xff;
    bad[3] = 0xff;
    bad[4] = 0xff;
    try {
      deserialize_data_packet(bad);
      FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
      CHECK(e.kind() == DecodeError::Kind::LengthOverflow);
    }
  }
  SUBCASE("trailing garbage") {
    Bytes bad = good;
    bad.push_back(0x00);
    CHECK_THROWS_AS(deserialize_data_packet(bad), DecodeError);
  }
  SUBCASE("wrong tag") {
    Bytes bad = good;
    bad[0] = 0x7f;
    CHECK_THROWS_AS(deserialize_data_packet(bad), DecodeError);
  }
}

TEST_CASE("invariant violations on decode") {
  SUBCASE("empty aggregate") {
    AggregatePacket m{"RSU1", 0, {EncryptedDataPacket{Nat(1), Bytes{1}}}};
    Bytes b = serialize_aggregate_packet(m);
    // zero out the packet count field (after tag + rsu_id + location)
    const std::size_t count_at = 1 + 4 + 4 + 8;
    b[count_at] = b[count_at + 1] = b[count_at + 2] = b[count_at + 3] = 0;
    b.resize(count_at + 4);
    try {
      deserialize_aggregate_packet(b);
      FAIL("expected DecodeError");
    } catch (const DecodeError& e) {
      CHECK(e.kind() == DecodeError::Kind::Invariant);
    }
  }
  SUBCASE("negative velocity") {
    Rng rng(13);
    DataPacket p = random_data_packet(rng, 1);
    p.vel_mph100 = 100;
    Bytes b = serialize_data_packet(p);
    // velocity sits right after v_id, ds and the event byte
    const std::size_t vel_at = 1 + 4 + p.v_id.size() + 4 + p.ds.size() + 1;
    b[vel_at] = 0xff;
    CHECK_THROWS_AS(deserialize_data_packet(b), DecodeError);
  }
  SUBCASE("challenge entries must not share a cv") {
    ChallengePacket m;
    m.entries[0] = ChallengeEntry{"CAR00001", {"RSU1"}, 5};
    m.entries[1] = ChallengeEntry{"CAR00002", {"RSU1"}, 5};
    Bytes b = serialize_challenge_packet(m);
    m.entries[1].cv = "CAR00001";
    CHECK_THROWS_AS(deserialize_challenge_packet(serialize_challenge_packet(m)),
                    DecodeError);
    CHECK_NOTHROW(deserialize_challenge_packet(b));
  }
}

TEST_CASE("fuzzed buffers decode or fail with a typed error, never crash") {
  Rng rng(17);
  int decoded = 0;
  for (int i = 0; i < 3000; ++i) {
    Bytes junk = rng.random_bytes(rng.uniform(0, 120));
    if (i % 3 == 0 && !junk.empty()) junk[0] = 0x01;  // aim at the data-packet tag
    try {
      (void)deserialize_data_packet(junk);
      ++decoded;
    } catch (const DecodeError&) {
    }
    try {
      (void)deserialize_aggregate_packet(junk);
      ++decoded;
    } catch (const DecodeError&) {
    }
  }
  CHECK(decoded >= 0);  // reaching here at all is the point
}

TEST_CASE("big naturals travel as length-prefixed big-endian bytes") {
  const Nat n("123456789012345678901234567890");
  const Bytes b = nat_to_bytes(n);
  CHECK(nat_from_bytes(b) == n);
  CHECK(nat_to_bytes(Nat(0)).empty());
  CHECK(nat_to_bytes(Nat(0x0102)) == Bytes{0x01, 0x02});
}
