#include "speechjudge/judge/guard.h"

#include <memory>

namespace speechjudge::judge {

InFlightLimiter::InFlightLimiter(int max_in_flight) : max_(max_in_flight) {
  if (max_in_flight < 1) throw ConfigError("max_in_flight must be at least 1");
}

InFlightLimiter::Permit InFlightLimiter::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_use_ < max_; });
  ++in_use_;
  return Permit(*this);
}

void InFlightLimiter::release() {
  {
    std::lock_guard lock(mu_);
    --in_use_;
  }
  cv_.notify_one();
}

namespace {

struct Guard {
  std::shared_ptr<InFlightLimiter> limiter;
  RetryPolicy policy;

  template <class F>
  auto run(std::string_view what, F&& call) {
    return with_retry(policy, what, [&] {
      auto permit = limiter->acquire();
      return call();
    });
  }
};

class GuardedChat : public ChatClient {
 public:
  GuardedChat(std::shared_ptr<ChatClient> inner, Guard guard)
      : inner_(std::move(inner)), guard_(std::move(guard)) {}
  std::string complete(const ChatRequest& r) override {
    return guard_.run("chat", [&] { return inner_->complete(r); });
  }

 private:
  std::shared_ptr<ChatClient> inner_;
  Guard guard_;
};

class GuardedTranscriber : public Transcriber {
 public:
  GuardedTranscriber(std::shared_ptr<Transcriber> inner, Guard guard)
      : inner_(std::move(inner)), guard_(std::move(guard)) {}
  std::string transcribe(const AudioClip& c) override {
    return guard_.run("transcription", [&] { return inner_->transcribe(c); });
  }

 private:
  std::shared_ptr<Transcriber> inner_;
  Guard guard_;
};

class GuardedSynthesizer : public Synthesizer {
 public:
  GuardedSynthesizer(std::shared_ptr<Synthesizer> inner, Guard guard)
      : inner_(std::move(inner)), guard_(std::move(guard)) {}
  SynthesisResult synthesize(const SynthesisRequest& r) override {
    return guard_.run("synthesis", [&] { return inner_->synthesize(r); });
  }

 private:
  std::shared_ptr<Synthesizer> inner_;
  Guard guard_;
};

class GuardedSpeechJudge : public SpeechJudgeClient {
 public:
  GuardedSpeechJudge(std::shared_ptr<SpeechJudgeClient> inner, Guard guard)
      : inner_(std::move(inner)), guard_(std::move(guard)) {}
  std::string judge(const SpeechJudgeRequest& r) override {
    return guard_.run("speech judge", [&] { return inner_->judge(r); });
  }

 private:
  std::shared_ptr<SpeechJudgeClient> inner_;
  Guard guard_;
};

template <class Wrapper, class Client>
std::shared_ptr<Client> wrap(const std::shared_ptr<Client>& inner, int k,
                             const RetryPolicy& policy) {
  if (!inner) return nullptr;
  return std::make_shared<Wrapper>(inner, Guard{std::make_shared<InFlightLimiter>(k), policy});
}

}  // namespace

ModelClients guard_clients(const ModelClients& clients, int max_in_flight, RetryPolicy policy) {
  ModelClients out;
  out.transcriber = wrap<GuardedTranscriber>(clients.transcriber, max_in_flight, policy);
  out.synthesizer = wrap<GuardedSynthesizer>(clients.synthesizer, max_in_flight, policy);
  out.chatter = wrap<GuardedChat>(clients.chatter, max_in_flight, policy);
  out.speech_judge = wrap<GuardedSpeechJudge>(clients.speech_judge, max_in_flight, policy);
  return out;
}

}  // namespace speechjudge::judge
