#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/text.h"
#include "speechjudge/judge/guard.h"
#include "speechjudge/judge/http_clients.h"
#include "speechjudge/judge/judge.h"
#include "speechjudge/judge/prompt.h"
#include "speechjudge/judge/simulated.h"
#include "speechjudge/judge/verdict_parser.h"
#include "speechjudge/pipeline/cache.h"
#include "test_support.h"

using namespace speechjudge;
using namespace speechjudge::judge;

namespace {

constexpr auto W = ComparisonLabel::kWin;
constexpr auto L = ComparisonLabel::kLose;
constexpr auto T = ComparisonLabel::kTie;

RetryPolicy instant_policy(int budget = 3) {
  RetryPolicy p;
  p.retry_budget = budget;
  p.sleep = [](std::chrono::milliseconds) {};
  return p;
}

}  // namespace

TEST(VerdictParser, TaggedAnswers) {
  EXPECT_EQ(parse_verdict("Because. <Answer>1</Answer>", false).label, W);
  EXPECT_EQ(parse_verdict("<answer> [2] </answer>", false).label, L);
  EXPECT_EQ(parse_verdict("<ANSWER>tie</ANSWER>", false).label, T);
  const auto v = parse_verdict("R1 is clearer.\nAnswer: <Answer>1</Answer>", false);
  EXPECT_EQ(v.rationale, "R1 is clearer.");
}

TEST(VerdictParser, LastTagWins) {
  EXPECT_EQ(parse_verdict("<Answer>1</Answer> on reflection <Answer>2</Answer>", false).label,
            L);
}

TEST(VerdictParser, BareTrailingToken) {
  EXPECT_EQ(parse_verdict("Response 2 is better. 2", false).label, L);
  EXPECT_EQ(parse_verdict("Final answer: **Tie**.", false).label, T);
  EXPECT_EQ(parse_verdict("1", false).label, W);
}

TEST(VerdictParser, UnparseableIsInvalidNotAnError) {
  for (std::string raw : {"", "I cannot decide", "<Answer>3</Answer>", "Response 3 or 4"}) {
    const auto v = parse_verdict(raw, false);
    EXPECT_FALSE(v.valid()) << raw;
    EXPECT_EQ(v.raw_completion, raw);
  }
}

TEST(VerdictParser, SwapInversionIdentity) {
  for (std::string tok : {"1", "2", "Tie", "tie"}) {
    for (std::string wrap : {"<Answer>%</Answer>", "x %", "Answer: <answer>[%]</answer>"}) {
      const auto raw = replace_all(wrap, "%", tok);
      const auto a = parse_verdict(raw, false);
      const auto b = parse_verdict(raw, true);
      ASSERT_TRUE(a.valid());
      EXPECT_EQ(b.label, invert_label(a.label));
      EXPECT_TRUE(b.order_swapped);
    }
  }
}

TEST(Prompt, TrainedAndBaselineTemplatesHaveTwoSlots) {
  for (auto mode : {PromptMode::kTrained, PromptMode::kBaseline}) {
    const auto p = render_judge_prompt(Aspect::instruction_following(), "Do X", mode);
    EXPECT_NE(p.text.find("instruction following"), std::string::npos);
    EXPECT_NE(p.text.find("Do X"), std::string::npos);
    EXPECT_EQ(p.text.substr(p.audio_slots[0], 7), "<audio>");
    EXPECT_EQ(p.text.substr(p.audio_slots[1], 7), "<audio>");
    EXPECT_LT(p.audio_slots[0], p.audio_slots[1]);
    const auto filled = p.with_transcripts("FIRST", "SECOND");
    EXPECT_EQ(filled.find("<audio>"), std::string::npos);
    EXPECT_LT(filled.find("FIRST"), filled.find("SECOND"));
  }
}

TEST(Prompt, InstructionContainingPlaceholderDoesNotShiftSlots) {
  const auto p = render_judge_prompt(Aspect::honesty(), "Say <audio> aloud");
  const auto filled = p.with_transcripts("A", "B");
  EXPECT_NE(filled.find("Say <audio> aloud"), std::string::npos);
}

TEST(Truncation, ProportionalScaling) {
  const auto r1 = sjtest::make_response("a", "x", 40.0);
  const auto r2 = sjtest::make_response("b", "y", 80.0);
  const auto plan = truncate_pair(r1, r2, 60.0);
  EXPECT_TRUE(plan.truncated);
  EXPECT_DOUBLE_EQ(plan.first.duration_s, 20.0);
  EXPECT_DOUBLE_EQ(plan.second.duration_s, 40.0);
  EXPECT_TRUE(plan.first.truncated());
  const auto fits = truncate_pair(r1, sjtest::make_response("b", "y", 20.0), 60.0);
  EXPECT_FALSE(fits.truncated);
  EXPECT_DOUBLE_EQ(fits.second.duration_s, 20.0);
}

TEST(JudgeConfig, Validation) {
  JudgeRunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.run_seeds.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.max_pair_audio_s = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(parse_backend("cascaded"), Backend::kCascaded);
  EXPECT_THROW(parse_backend("magic"), ConfigError);
}

TEST(JudgeE2E, SwapPresentsReversedAudioAndInverts) {
  const auto rec = sjtest::make_semantic_record("r", W);
  std::vector<std::string> seen;
  ModelClients c;
  c.speech_judge = std::make_shared<FunctionSpeechJudge>([&](const SpeechJudgeRequest& r) {
    seen.push_back(r.first.audio_ref);
    EXPECT_EQ(r.sampling.seed, 7u);
    return std::string("<Answer>1</Answer>");
  });
  JudgeRunConfig cfg;
  const auto fwd = judge_pair_e2e(rec, Aspect::honesty(), c, cfg, 7, {false, nullptr});
  const auto rev = judge_pair_e2e(rec, Aspect::honesty(), c, cfg, 7, {true, nullptr});
  EXPECT_EQ(seen[0], rec.response_1.audio_ref);
  EXPECT_EQ(seen[1], rec.response_2.audio_ref);
  EXPECT_EQ(fwd.label, W);
  EXPECT_EQ(rev.label, L);
  EXPECT_EQ(rev.run_seed, 7u);
  EXPECT_EQ(rev.aspect, Aspect::honesty());
}

TEST(JudgeE2E, LongPairIsTruncated) {
  const auto rec = sjtest::make_semantic_record("r", W, 50.0, 50.0);
  double total = 0;
  ModelClients c;
  c.speech_judge = std::make_shared<FunctionSpeechJudge>([&](const SpeechJudgeRequest& r) {
    total = r.first.duration_s + r.second.duration_s;
    return std::string("<Answer>Tie</Answer>");
  });
  const auto v = judge_pair_e2e(rec, Aspect::honesty(), c, {}, 1);
  EXPECT_TRUE(v.truncated);
  EXPECT_DOUBLE_EQ(total, 60.0);
}

TEST(JudgeBothOrders, OracleIsConsistentAndAlwaysOneIsNot) {
  std::vector<PreferenceRecord> recs{sjtest::make_semantic_record("a", W),
                                     sjtest::make_semantic_record("b", L),
                                     sjtest::make_semantic_record("c", T)};
  ModelClients oracle;
  oracle.speech_judge = std::make_shared<OracleSpeechJudge>(recs);
  ModelClients always;
  always.speech_judge = std::make_shared<ConstantSpeechJudge>("<Answer>1</Answer>");
  for (const auto& r : recs) {
    const auto p = judge_both_orders(r, Aspect::honesty(), Backend::kEndToEnd, oracle, {}, 42);
    EXPECT_TRUE(p.consistent);
    EXPECT_EQ(p.forward.label, r.labels.at(Aspect::honesty()));
    const auto q = judge_both_orders(r, Aspect::honesty(), Backend::kEndToEnd, always, {}, 42);
    EXPECT_FALSE(q.consistent);
  }
}

TEST(JudgeBothOrders, InvalidForwardIsInconsistent) {
  const auto rec = sjtest::make_semantic_record("a", T);
  ModelClients c;
  c.speech_judge = std::make_shared<FunctionSpeechJudge>(
      [](const SpeechJudgeRequest&) { return std::string("no idea"); });
  const auto p = judge_both_orders(rec, Aspect::honesty(), Backend::kEndToEnd, c, {}, 1);
  EXPECT_FALSE(p.consistent);
}

TEST(JudgeCascaded, SeesOnlyTextAndTranscribesMissingTranscripts) {
  auto rec = sjtest::make_semantic_record("r", W);
  rec.response_1.transcript = "given transcript";
  int transcribed = 0;
  std::string prompt_seen;
  ModelClients c;
  c.transcriber = std::make_shared<FunctionTranscriber>([&](const AudioClip& clip) {
    ++transcribed;
    EXPECT_EQ(clip.audio_ref, rec.response_2.audio_ref);
    return std::string("heard second");
  });
  c.chatter = std::make_shared<FunctionChat>([&](const ChatRequest& r) {
    prompt_seen = r.messages.back().content;
    return std::string("<Answer>2</Answer>");
  });
  c.speech_judge = std::make_shared<FunctionSpeechJudge>(
      [](const SpeechJudgeRequest&) -> std::string { ADD_FAILURE(); return ""; });
  const auto v = judge_pair_cascaded(rec, Aspect::helpfulness(), c, {}, 1, {true, nullptr});
  EXPECT_EQ(transcribed, 1);
  EXPECT_EQ(prompt_seen.find("<audio>"), std::string::npos);
  EXPECT_LT(prompt_seen.find("heard second"), prompt_seen.find("given transcript"));
  EXPECT_EQ(v.label, W);
}

TEST(JudgeCascaded, TranscriptionFailureNamesTheResponse) {
  const auto rec = sjtest::make_semantic_record("r", W);
  ModelClients c;
  c.transcriber = std::make_shared<FunctionTranscriber>(
      [](const AudioClip&) -> std::string { throw IoError("gone"); });
  c.chatter = std::make_shared<SimulatedChat>();
  try {
    judge_pair_cascaded(rec, Aspect::helpfulness(), c, {}, 1);
    FAIL();
  } catch (const TransportError& e) {
    EXPECT_NE(std::string(e.what()).find("response_1"), std::string::npos);
  }
}

TEST(JudgeCache, VerdictsAreMemoized) {
  const auto rec = sjtest::make_semantic_record("r", W);
  int calls = 0;
  ModelClients c;
  c.speech_judge = std::make_shared<FunctionSpeechJudge>([&](const SpeechJudgeRequest&) {
    ++calls;
    return std::string("<Answer>1</Answer>");
  });
  pipeline::CallCache cache;
  judge_pair(rec, Aspect::honesty(), Backend::kEndToEnd, c, {}, 1, {false, &cache});
  judge_pair(rec, Aspect::honesty(), Backend::kEndToEnd, c, {}, 1, {false, &cache});
  judge_pair(rec, Aspect::honesty(), Backend::kEndToEnd, c, {}, 2, {false, &cache});
  EXPECT_EQ(calls, 2);
  EXPECT_NE(verdict_cache_key("r", Aspect::honesty(), Backend::kEndToEnd, false, 1, "p"),
            verdict_cache_key("r", Aspect::honesty(), Backend::kEndToEnd, true, 1, "p"));
}

TEST(Retry, RetriesTransportErrorsWithinBudget) {
  std::vector<long> sleeps;
  auto policy = instant_policy(3);
  policy.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); };
  int attempts = 0;
  const int v = with_retry(policy, "op", [&] {
    if (++attempts < 3) throw TransportError("flaky");
    return 5;
  });
  EXPECT_EQ(v, 5);
  EXPECT_EQ(sleeps, (std::vector<long>{200, 400}));
}

TEST(Retry, GivesUpAndDoesNotRetryOtherErrors) {
  int attempts = 0;
  EXPECT_THROW(with_retry(instant_policy(2), "op",
                          [&]() -> int {
                            ++attempts;
                            throw TransportError("down");
                          }),
               TransportError);
  EXPECT_EQ(attempts, 3);
  attempts = 0;
  EXPECT_THROW(with_retry(instant_policy(2), "op",
                          [&]() -> int {
                            ++attempts;
                            throw ConfigError("bad");
                          }),
               ConfigError);
  EXPECT_EQ(attempts, 1);
}

TEST(Limiter, BoundsConcurrentCalls) {
  std::atomic<int> live{0}, peak{0};
  ModelClients raw;
  raw.chatter = std::make_shared<FunctionChat>([&](const ChatRequest&) {
    const int now = ++live;
    int p = peak.load();
    while (now > p && !peak.compare_exchange_weak(p, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --live;
    return std::string("ok");
  });
  const auto guarded = guard_clients(raw, 2, instant_policy());
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] { guarded.chatter->complete(user_request("x")); });
  }
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
  EXPECT_THROW(InFlightLimiter(0), ConfigError);
}

TEST(Base64, RoundTripAndRejectsGarbage) {
  for (std::string s : {std::string(""), std::string("a"), std::string("ab"),
                        std::string("abc"), std::string("\0\xff\x10 binary", 10)}) {
    EXPECT_EQ(base64_decode(base64_encode(s)), s);
  }
  EXPECT_EQ(base64_encode("Man"), "TWFu");
  EXPECT_THROW(base64_decode("!!!"), IoError);
}

TEST(Http, SplitUrl) {
  const auto u = split_url("http://localhost:8080/v1/chat");
  EXPECT_EQ(u.origin, "http://localhost:8080");
  EXPECT_EQ(u.path, "/v1/chat");
  EXPECT_EQ(split_url("https://host").path, "/");
}

class HttpService : public ::testing::Test {
 protected:
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::atomic<int> failures_left{0};
  nlohmann::json last_body;
  std::mutex mu;

  void SetUp() override {
    server.Post("/chat", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu);
      last_body = nlohmann::json::parse(req.body);
      if (failures_left > 0) {
        --failures_left;
        res.status = 503;
        return;
      }
      nlohmann::json reply{{"choices", {{{"message", {{"content", "<Answer>2</Answer>"}}}}}}};
      res.set_content(reply.dump(), "application/json");
    });
    server.Post("/bad", [](const httplib::Request&, httplib::Response& res) {
      res.status = 400;
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  void TearDown() override {
    server.stop();
    thread.join();
  }
  ServiceEndpoint endpoint(const std::string& path) {
    ServiceEndpoint e;
    e.url = "http://127.0.0.1:" + std::to_string(port) + path;
    e.model = "m";
    e.timeout = std::chrono::milliseconds(2000);
    return e;
  }
};

TEST_F(HttpService, ChatClientSendsOpenAiShapeAndParsesReply) {
  HttpChatClient client(endpoint("/chat"));
  EXPECT_EQ(client.complete(user_request("hello", greedy_sampling())), "<Answer>2</Answer>");
  std::lock_guard lock(mu);
  EXPECT_EQ(last_body["model"], "m");
  EXPECT_EQ(last_body["messages"][0]["content"], "hello");
  EXPECT_EQ(last_body["temperature"], 0.0);
}

TEST_F(HttpService, ServerErrorsAreRetriedThroughGuard) {
  failures_left = 2;
  ModelClients raw;
  raw.chatter = std::make_shared<HttpChatClient>(endpoint("/chat"));
  const auto guarded = guard_clients(raw, 1, instant_policy(3));
  EXPECT_EQ(guarded.chatter->complete(user_request("x")), "<Answer>2</Answer>");
}

TEST_F(HttpService, ClientErrorsAreNotTransportErrors) {
  HttpChatClient client(endpoint("/bad"));
  try {
    client.complete(user_request("x"));
    FAIL();
  } catch (const TransportError&) {
    FAIL() << "4xx must not be retried";
  } catch (const Error&) {
  }
}

TEST(Http, UnreachableServiceIsTransportError) {
  ServiceEndpoint e;
  e.url = "http://127.0.0.1:1/none";
  e.timeout = std::chrono::milliseconds(500);
  HttpChatClient client(e);
  EXPECT_THROW(client.complete(user_request("x")), TransportError);
}

TEST(Simulated, SynthesisAndTranscriptionRoundTrip) {
  sjtest::TempDir dir;
  SimulatedSynthesizer synth(dir.path());
  SimulatedTranscriber asr(dir.path());
  const auto out = synth.synthesize({"one two three four", std::nullopt, "tts", "audio/x.wav"});
  EXPECT_DOUBLE_EQ(out.duration_s, 1.6);
  EXPECT_TRUE(std::filesystem::exists(dir / "audio/x.wav"));
  EXPECT_EQ(asr.transcribe({"audio/x.wav", 0, 1.6, 1.6}), "one two three four");
  EXPECT_EQ(asr.transcribe({"audio/x.wav", 0, 0.8, 1.6}), "one two");
  EXPECT_THROW(asr.transcribe({"audio/missing.wav", 0, 1, 1}), TransportError);
}
