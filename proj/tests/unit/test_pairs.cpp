#include <gtest/gtest.h>

#include <fstream>

#include <algorithm>
#include <set>

#include "speechjudge/core/errors.h"
#include "speechjudge/core/rng.h"
#include "speechjudge/judge/simulated.h"
#include "speechjudge/pairs/acoustic.h"
#include "speechjudge/pairs/plan.h"
#include "speechjudge/pairs/rationale.h"
#include "speechjudge/pairs/semantic.h"
#include "speechjudge/pairs/templates.h"
#include "speechjudge/pipeline/cache.h"
#include "test_support.h"

using namespace speechjudge;
using namespace speechjudge::pairs;

namespace {

const std::vector<std::string> kRoster{"Owl", "Comet", "Bubbles", "Bear", "Rex"};

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

StyleControlSpec emotion(std::string e) {
  return {StyleCategory::kEmotion, std::move(e), false, std::nullopt};
}

}  // namespace

TEST(ScoresToPairwise, ComparesAndValidatesRange) {
  EXPECT_EQ(scores_to_pairwise(5, 2), ComparisonLabel::kWin);
  EXPECT_EQ(scores_to_pairwise(1, 4), ComparisonLabel::kLose);
  EXPECT_EQ(scores_to_pairwise(3, 3), ComparisonLabel::kTie);
  EXPECT_THROW(scores_to_pairwise(0, 3), DomainError);
  EXPECT_THROW(scores_to_pairwise(3, 6), DomainError);
}

TEST(IncorrectLabels, Emotion) {
  EXPECT_EQ(as_set(incorrect_label_set(StyleCategory::kEmotion, "happy")),
            (std::set<std::string>{"sad", "fearful", "angry", "neutral"}));
  EXPECT_EQ(as_set(incorrect_label_set(StyleCategory::kEmotion, "angry")),
            (std::set<std::string>{"happy", "surprised", "neutral"}));
  EXPECT_THROW(incorrect_label_set(StyleCategory::kEmotion, "neutral"), DomainError);
}

TEST(IncorrectLabels, GenderAndVoice) {
  EXPECT_EQ(incorrect_label_set(StyleCategory::kGender, "male"),
            (std::vector<std::string>{"female"}));
  EXPECT_THROW(incorrect_label_set(StyleCategory::kGender, "robot"), DomainError);
  EXPECT_EQ(as_set(incorrect_label_set(StyleCategory::kVoice, "Owl", kRoster)),
            (std::set<std::string>{"neutral", "Comet", "Bubbles", "Bear", "Rex"}));
  EXPECT_THROW(incorrect_label_set(StyleCategory::kVoice, "Zed", kRoster), DomainError);
}

TEST(IncorrectLabels, TargetNeverAppearsInItsOwnSet) {
  for (auto e : kPolarEmotions) {
    const auto s = incorrect_label_set(StyleCategory::kEmotion, e);
    EXPECT_EQ(std::count(s.begin(), s.end(), std::string(e)), 0);
  }
  for (const auto& v : kRoster) {
    const auto s = incorrect_label_set(StyleCategory::kVoice, v, kRoster);
    EXPECT_EQ(std::count(s.begin(), s.end(), v), 0);
  }
}

TEST(IncorrectStyles, MixedCombinesEmotionAndGender) {
  StyleControlSpec t{StyleCategory::kEmotion, "sad", true, std::string("female")};
  const auto wrong = incorrect_styles(t);
  // {sad, happy, surprised, neutral} x {male, female} minus the target.
  EXPECT_EQ(wrong.size(), 7u);
  for (const auto& w : wrong) {
    EXPECT_TRUE(w.mixed);
    EXPECT_FALSE(style_matches(w, t));
  }
  t.gender_label.reset();
  EXPECT_THROW(incorrect_styles(t), DomainError);
}

TEST(PairPlan, LabelsFollowPlanKind) {
  auto rng = make_rng(9, "plan");
  const auto target = emotion("happy");
  std::map<PlanKind, int> counts;
  for (int i = 0; i < 3000; ++i) {
    const auto p = sample_pair_plan(target, rng);
    ++counts[p.plan_kind];
    const bool m1 = style_matches(p.style_1, target);
    const bool m2 = style_matches(p.style_2, target);
    switch (p.plan_kind) {
      case PlanKind::kCorrectCorrect:
        EXPECT_TRUE(m1 && m2);
        EXPECT_EQ(p.acoustic_label, ComparisonLabel::kTie);
        break;
      case PlanKind::kCorrectIncorrect:
        EXPECT_NE(m1, m2);
        EXPECT_EQ(p.acoustic_label, m1 ? ComparisonLabel::kWin : ComparisonLabel::kLose);
        break;
      case PlanKind::kIncorrectIncorrect:
        EXPECT_FALSE(m1 || m2);
        EXPECT_EQ(p.acoustic_label, ComparisonLabel::kTie);
        break;
    }
  }
  EXPECT_EQ(counts.size(), 3u);
}

TEST(PairPlan, SeededSamplingIsReproducible) {
  auto a = make_rng(1, "s");
  auto b = make_rng(1, "s");
  for (int i = 0; i < 100; ++i) {
    const auto pa = sample_pair_plan(emotion("sad"), a);
    const auto pb = sample_pair_plan(emotion("sad"), b);
    EXPECT_EQ(pa.style_1, pb.style_1);
    EXPECT_EQ(pa.style_2, pb.style_2);
  }
}

TEST(Templates, EmbeddedBankCoversEveryCategoryAndFormat) {
  const auto bank = TemplateBank::embedded();
  auto rng = make_rng(1, "t");
  for (auto fmt : {TaskFormat::kExplicitTts, TaskFormat::kExplicitDialogue}) {
    for (auto e : kPolarEmotions) {
      const auto text = render_style_instruction(emotion(std::string(e)), fmt, bank, rng);
      EXPECT_NE(text.find(e), std::string::npos) << text;
    }
    for (auto g : kGenderVocabulary) {
      StyleControlSpec s{StyleCategory::kGender, std::string(g), false, std::nullopt};
      for (const auto& c : bank.candidates(s, fmt)) EXPECT_EQ(template_gender(c), g);
      EXPECT_FALSE(bank.candidates(s, fmt).empty());
    }
    StyleControlSpec v{StyleCategory::kVoice, "Owl", false, std::nullopt};
    EXPECT_NE(render_style_instruction(v, fmt, bank, rng).find("Owl"), std::string::npos);
    StyleControlSpec m{StyleCategory::kEmotion, "sad", true, std::string("female")};
    const auto mixed = render_style_instruction(m, fmt, bank, rng);
    EXPECT_EQ(template_gender(mixed), "female");
    EXPECT_NE(mixed.find("sad"), std::string::npos);
  }
}

TEST(Templates, GenderDetection) {
  EXPECT_EQ(template_gender("Use a male voice"), "male");
  EXPECT_EQ(template_gender("Use a female voice"), "female");
  EXPECT_EQ(template_gender("Speak as a woman would"), "female");
  EXPECT_EQ(template_gender("Speak as a man would"), "male");
  EXPECT_FALSE(template_gender("Speak calmly").has_value());
}

TEST(Templates, ErrorsOnMissingBankAndLeftoverPlaceholder) {
  TemplateBank bank;
  auto rng = make_rng(1, "t");
  EXPECT_THROW(render_style_instruction(emotion("happy"), TaskFormat::kExplicitTts, bank, rng),
               TemplateError);
  bank.add(StyleCategory::kEmotion, false, TaskFormat::kExplicitTts, "Say it <adverb>.");
  EXPECT_THROW(render_style_instruction(emotion("happy"), TaskFormat::kExplicitTts, bank, rng),
               TemplateError);
}

TEST(Templates, FromDirectory) {
  sjtest::TempDir dir;
  {
    std::ofstream(dir / "tts_emotion.txt") << "Be <emotion>.\n\nSound <emotion>.\n";
  }
  const auto bank = TemplateBank::from_directory(dir.path());
  EXPECT_EQ(bank.candidates(emotion("sad"), TaskFormat::kExplicitTts).size(), 2u);
}

TEST(Rationale, ComparativeRewriteIsCachedAndRejectsEmpty) {
  int calls = 0;
  judge::FunctionChat chat([&](const judge::ChatRequest& r) {
    ++calls;
    EXPECT_NE(r.messages.back().content.find("Response 1 is better"), std::string::npos);
    return std::string("  R1 covers more.  ");
  });
  pipeline::CallCache cache;
  const auto a = rewrite_rationale_comparative("q", "t1", "t2", ComparisonLabel::kWin,
                                               Aspect::helpfulness(), chat, &cache);
  const auto b = rewrite_rationale_comparative("q", "t1", "t2", ComparisonLabel::kWin,
                                               Aspect::helpfulness(), chat, &cache);
  EXPECT_EQ(a, b);
  EXPECT_EQ(calls, 1);
  judge::FunctionChat empty([](const judge::ChatRequest&) { return std::string(" "); });
  EXPECT_THROW(rewrite_rationale_comparative("q", "a", "b", ComparisonLabel::kTie,
                                             Aspect::honesty(), empty),
               Error);
}

TEST(Semantic, SeedParsingValidatesScores) {
  nlohmann::json j = {{"id", "s"},
                      {"instruction", "q"},
                      {"responses",
                       {{{"text", "a"},
                         {"scores", {{"helpfulness", 6}, {"honesty", 1},
                                     {"instruction_following", 1}, {"truthfulness", 1}}}}}}};
  EXPECT_THROW(semantic_seed_from_json(j), DomainError);
  j["responses"][0]["scores"]["helpfulness"] = 3;
  EXPECT_EQ(semantic_seed_from_json(j).responses.size(), 1u);
}

class SemanticBuild : public ::testing::Test {
 protected:
  sjtest::TempDir dir;
  judge::SimulatedChat chat;
  judge::SimulatedLanguageDetector detector;
  judge::ModelClients clients() {
    judge::ModelClients c;
    c.synthesizer = std::make_shared<judge::SimulatedSynthesizer>(dir.path());
    c.transcriber = std::make_shared<judge::SimulatedTranscriber>(dir.path());
    c.chatter = std::make_shared<judge::SimulatedChat>();
    return c;
  }
  SemanticBuildOptions options() {
    SemanticBuildOptions o;
    o.filter.classifier = &chat;
    o.filter.detector = &detector;
    return o;
  }
  SemanticSeed seed(int n) {
    SemanticSeed s;
    s.id = "s";
    s.instruction = "How do I keep houseplants healthy?";
    for (int i = 0; i < n; ++i) {
      RatedResponse r;
      r.text = "Water the plant when the soil is dry, option number " + std::to_string(i) + ".";
      for (auto a : semantic_aspects()) r.scores[a] = 1 + (i % 5);
      r.source_model_id = "m" + std::to_string(i);
      s.responses.push_back(r);
    }
    return s;
  }
};

TEST_F(SemanticBuild, PairsSurvivorsAndCapsPerInstruction) {
  auto o = options();
  o.max_pairs_per_instruction = 6;
  const auto four = build_semantic_instruction(seed(4), clients(), o);
  EXPECT_EQ(four.records.size(), 6u);
  const auto five = build_semantic_instruction(seed(5), clients(), o);
  EXPECT_EQ(five.records.size(), 6u);
  std::set<std::string> ids;
  for (const auto& r : five.records) {
    EXPECT_TRUE(ids.insert(r.id).second);
    EXPECT_TRUE(r.response_1.filtered && r.response_2.filtered);
    EXPECT_EQ(r.labels.size(), 4u);
    for (const auto& [aspect, label] : r.labels) {
      EXPECT_FALSE(r.rationales.at(aspect).empty());
    }
  }
}

TEST_F(SemanticBuild, LabelsFollowScoresInPresentedOrder) {
  const auto out = build_semantic_instruction(seed(4), clients(), options());
  for (const auto& r : out.records) {
    // Scores were 1 + index, so the longer option number wins.
    const auto idx = [](const SpeechResponse& s) {
      return s.source_text.back() == '.' ? s.source_text[s.source_text.size() - 2] - '0' : -1;
    };
    const auto expected = scores_to_pairwise(1 + idx(r.response_1), 1 + idx(r.response_2));
    EXPECT_EQ(r.labels.at(Aspect::helpfulness()), expected);
  }
}

TEST_F(SemanticBuild, SingleSurvivorYieldsNoPairs) {
  const auto out = build_semantic_instruction(seed(1), clients(), options());
  EXPECT_TRUE(out.records.empty());
}

TEST_F(SemanticBuild, HighWerDropsResponse) {
  auto c = clients();
  auto real = std::make_shared<judge::SimulatedTranscriber>(dir.path());
  c.transcriber = std::make_shared<judge::FunctionTranscriber>(
      [real](const judge::AudioClip& clip) -> std::string {
        if (clip.audio_ref.find("_r0") != std::string::npos) return "completely wrong words";
        return real->transcribe(clip);
      });
  const auto out = build_semantic_instruction(seed(3), c, options());
  EXPECT_EQ(out.records.size(), 1u);
  bool saw = false;
  for (const auto& row : out.filter_rows) {
    if (row["drop_reason"] == "high_wer") saw = true;
  }
  EXPECT_TRUE(saw);
}

TEST_F(SemanticBuild, RationaleFailureMarksPending) {
  auto c = clients();
  c.chatter = std::make_shared<judge::FunctionChat>(
      [](const judge::ChatRequest&) -> std::string { throw TransportError("down"); });
  const auto out = build_semantic_instruction(seed(2), c, options());
  ASSERT_EQ(out.records.size(), 1u);
  EXPECT_EQ(out.records[0].pending_rationales.size(), 4u);
}

class AcousticBuild : public ::testing::Test {
 protected:
  sjtest::TempDir dir;
  TemplateBank bank = TemplateBank::embedded();
  judge::ModelClients clients() {
    judge::ModelClients c;
    c.synthesizer = std::make_shared<judge::SimulatedSynthesizer>(dir.path());
    c.transcriber = std::make_shared<judge::SimulatedTranscriber>(dir.path());
    c.chatter = std::make_shared<judge::SimulatedChat>();
    return c;
  }
  AcousticBuildOptions options() {
    AcousticBuildOptions o;
    o.voice_roster = kRoster;
    o.bank = &bank;
    return o;
  }
  AcousticJob job(TaskFormat f, StyleRequest r, std::string id) {
    AcousticJob j;
    j.record_id = std::move(id);
    j.format = f;
    j.request = r;
    j.seed.id = "seed";
    j.seed.query = "Tell me about your weekend.";
    j.seed.candidate_texts = {"I went hiking by the lake.", "I stayed home and read.",
                              "I visited my grandparents."};
    if (f == TaskFormat::kImplicitDialogue) j.seed.implied_emotion = "happy";
    return j;
  }
};

TEST_F(AcousticBuild, TtsUsesOneTextForBothResponses) {
  for (int i = 0; i < 10; ++i) {
    const auto out = build_acoustic_instance(
        job(TaskFormat::kExplicitTts, StyleRequest::kEmotion, "tts-" + std::to_string(i)),
        clients(), options());
    ASSERT_TRUE(out.record);
    const auto& r = *out.record;
    EXPECT_EQ(r.response_1.source_text, r.response_2.source_text);
    EXPECT_NE(r.instruction.find(r.response_1.source_text), std::string::npos);
    ASSERT_EQ(r.labels.size(), 1u);
    EXPECT_TRUE(r.labels.contains(Aspect::speech(SpeechSubKind::kEmotion)));
  }
}

TEST_F(AcousticBuild, DialogueUsesTwoDistinctTexts) {
  const auto out = build_acoustic_instance(
      job(TaskFormat::kExplicitDialogue, StyleRequest::kMixed, "d-1"), clients(), options());
  ASSERT_TRUE(out.record);
  EXPECT_NE(out.record->response_1.source_text, out.record->response_2.source_text);
  EXPECT_TRUE(out.record->labels.contains(Aspect::speech(SpeechSubKind::kMixed)));
  EXPECT_TRUE(out.record->response_1.style->mixed);
}

TEST_F(AcousticBuild, ImplicitUsesTheQueryAsInstruction) {
  const auto out = build_acoustic_instance(
      job(TaskFormat::kImplicitDialogue, StyleRequest::kEmotion, "i-1"), clients(), options());
  ASSERT_TRUE(out.record);
  EXPECT_EQ(out.record->instruction, "Tell me about your weekend.");
  EXPECT_TRUE(out.record->labels.contains(Aspect::speech(SpeechSubKind::kImplicitEmotion)));
  EXPECT_FALSE(out.record->rationales.begin()->second.empty());
}

TEST_F(AcousticBuild, SynthesisFailureSkips) {
  auto c = clients();
  c.synthesizer = std::make_shared<judge::FunctionSynthesizer>(
      [](const judge::SynthesisRequest&) -> judge::SynthesisResult {
        throw Error("voice unsupported");
      });
  const auto out =
      build_acoustic_instance(job(TaskFormat::kExplicitTts, StyleRequest::kGender, "x"), c,
                              options());
  EXPECT_FALSE(out.record);
  EXPECT_FALSE(out.skip_reason.empty());
}

TEST_F(AcousticBuild, UnreachableSynthesizerPropagates) {
  auto c = clients();
  c.synthesizer = std::make_shared<judge::FunctionSynthesizer>(
      [](const judge::SynthesisRequest&) -> judge::SynthesisResult {
        throw TransportError("tts down");
      });
  EXPECT_THROW(build_acoustic_instance(job(TaskFormat::kExplicitTts, StyleRequest::kGender, "x"),
                                       c, options()),
               TransportError);
}

TEST_F(AcousticBuild, PreconditionsAreChecked) {
  auto j = job(TaskFormat::kImplicitDialogue, StyleRequest::kEmotion, "x");
  j.seed.implied_emotion = "neutral";
  EXPECT_THROW(build_acoustic_instance(j, clients(), options()), PreconditionError);
  j = job(TaskFormat::kSemantic, StyleRequest::kEmotion, "x");
  EXPECT_THROW(build_acoustic_instance(j, clients(), options()), PreconditionError);
  auto o = options();
  o.voice_roster.clear();
  EXPECT_THROW(build_acoustic_instance(job(TaskFormat::kExplicitTts, StyleRequest::kVoice, "v"),
                                       clients(), o),
               ConfigError);
}

TEST_F(AcousticBuild, SameIdSameRecord) {
  const auto a = build_acoustic_instance(
      job(TaskFormat::kExplicitDialogue, StyleRequest::kVoice, "same"), clients(), options());
  const auto b = build_acoustic_instance(
      job(TaskFormat::kExplicitDialogue, StyleRequest::kVoice, "same"), clients(), options());
  EXPECT_EQ(*a.record, *b.record);
}
