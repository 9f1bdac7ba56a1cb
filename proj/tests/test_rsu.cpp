#include "vanetmon/rsu.hpp"

#include "doctest.h"
#include "vanetmon/random.hpp"

using namespace vanetmon;

namespace {

const RsuSite kSite{"RSU1", 500 * kE7PerMeter};
constexpr millis_t kSigma = 10'000;

EncryptedDataPacket packet_no(int n) {
  return EncryptedDataPacket{Nat(n), Bytes{static_cast<std::uint8_t>(n)}};
}

}  // namespace

TEST_CASE("buffer flushes on the threshold-th packet") {
  RsuAgent rsu(kSite, 5'105'000'000, 3, kSigma);
  CHECK_FALSE(rsu.collect_and_flush(packet_no(1), 1000));
  CHECK_FALSE(rsu.collect_and_flush(packet_no(2), 1500));
  const auto agg = rsu.collect_and_flush(packet_no(3), 2000);
  REQUIRE(agg.has_value());
  CHECK(agg->rsu_id == "RSU1");
  CHECK(agg->location_mm == 500'000);
  CHECK(agg->packets.size() == 3);
  // buffer reset: the next packet starts a new batch
  CHECK_FALSE(rsu.collect_and_flush(packet_no(4), 2500));
  CHECK(rsu.flush_deadline() == 2500 + kSigma);
}

TEST_CASE("a lone packet flushes once sigma elapses") {
  RsuAgent rsu(kSite, 5'105'000'000, 3, kSigma);
  CHECK_FALSE(rsu.collect_and_flush(packet_no(1), 1000));
  CHECK_FALSE(rsu.flush_if_due(10'999));
  const auto agg = rsu.flush_if_due(11'000);
  REQUIRE(agg.has_value());
  CHECK(agg->packets.size() == 1);
  // nothing buffered, nothing to flush
  CHECK_FALSE(rsu.flush_if_due(50'000));
  CHECK_FALSE(rsu.flush_deadline().has_value());
}

TEST_CASE("each packet is flushed exactly once across batches") {
  RsuAgent rsu(kSite, 5'105'000'000, 2, kSigma);
  std::vector<int> seen;
  for (int n = 1; n <= 7; ++n) {
    if (auto agg = rsu.collect_and_flush(packet_no(n), n * 100)) {
      for (const auto& p : agg->packets)
        seen.push_back(static_cast<int>(p.tau.get_si()));
    }
  }
  if (auto agg = rsu.flush_if_due(100'000)) {
    for (const auto& p : agg->packets)
      seen.push_back(static_cast<int>(p.tau.get_si()));
  }
  CHECK(seen == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("challenge window accepts responses only inside [start, start+sigma]") {
  RsuAgent rsu(kSite, 5'105'000'000, 3, kSigma);
  RsuAssignment a;
  a.cv = "CAR00042";
  a.testing_word = "WORDTEST";
  a.left_num = 9;
  a.time_s = 20;
  rsu.add_assignment(a);

  const Bytes challenge = rsu.open_window(0, 20'000);
  CHECK(challenge == make_crypto_challenge("CAR00042", "WORDTEST", 9));
  CHECK(rsu.window_close(0) == 30'000);

  const Bytes good = make_crypto_response("CAR00042", challenge);

  SUBCASE("on time") {
    rsu.on_response(good, 25'000);
    CHECK(rsu.search_result(0).response == SearchResponse::Received);
  }
  SUBCASE("exactly at the close instant") {
    rsu.on_response(good, 30'000);
    CHECK(rsu.search_result(0).response == SearchResponse::Received);
  }
  SUBCASE("any later delivery is ignored") {
    rsu.on_response(good, 30'001);
    CHECK(rsu.search_result(0).response == SearchResponse::NotReceived);
  }
  SUBCASE("before the broadcast is ignored") {
    rsu.on_response(good, 19'999);
    CHECK(rsu.search_result(0).response == SearchResponse::NotReceived);
  }
}

TEST_CASE("run_challenge verdicts") {
  RsuAssignment a;
  a.cv = "CAR00042";
  a.testing_word = "TESTWORD";
  a.left_num = 5;
  const Bytes challenge = make_crypto_challenge(a.cv, a.testing_word, a.left_num);

  SUBCASE("targeted cv in range during the window") {
    const VehicleSearch s = run_challenge(
        kSite, a, 20'000,
        {{make_crypto_response("CAR00042", challenge), 21'000}}, kSigma);
    CHECK(s.rsu_id == "RSU1");
    CHECK(s.cv == "CAR00042");
    CHECK(s.response == SearchResponse::Received);
  }
  SUBCASE("cv absent") {
    const VehicleSearch s = run_challenge(kSite, a, 20'000, {}, kSigma);
    CHECK(s.response == SearchResponse::NotReceived);
  }
  SUBCASE("only non-targeted vehicles respond") {
    std::vector<TimedResponse> responses;
    Rng rng(3);
    for (int i = 0; i < 64; ++i) {
      const std::string other = rng.uppercase_alnum(8);
      if (other == "CAR00042") continue;
      responses.push_back({make_crypto_response(other, challenge), 21'000});
    }
    const VehicleSearch s = run_challenge(kSite, a, 20'000, responses, kSigma);
    CHECK(s.response == SearchResponse::NotReceived);
  }
}

TEST_CASE("overlapping assignments keep independent windows") {
  RsuAgent rsu(kSite, 5'105'000'000, 3, kSigma);
  RsuAssignment a1{"CAR00001", "AAAABBBB", 3, 10, -1, false};
  RsuAssignment a2{"CAR00002", "CCCCDDDD", 7, 15, -1, false};
  rsu.add_assignment(a1);
  rsu.add_assignment(a2);
  const Bytes c1 = rsu.open_window(0, 10'000);
  const Bytes c2 = rsu.open_window(1, 15'000);

  rsu.on_response(make_crypto_response("CAR00002", c2), 16'000);
  CHECK(rsu.search_result(0).response == SearchResponse::NotReceived);
  CHECK(rsu.search_result(1).response == SearchResponse::Received);

  rsu.on_response(make_crypto_response("CAR00001", c1), 12'000);
  CHECK(rsu.search_result(0).response == SearchResponse::Received);
}
