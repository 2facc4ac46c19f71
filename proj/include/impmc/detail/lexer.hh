#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <impmc/common.hh>

namespace impmc::detail
{
  enum class tok
  {
    ident, lparen, rparen, lbrace, rbrace, lbrack, rbrack, comma, semicolon,
    colon, equals, bang, amp, bar, implies, iff, end
  };

  struct token
  {
    tok kind;
    std::string text;
    std::size_t pos;
  };

  /// Shared tokenizer for the condition mini-language and the LTL/CTL
  /// grammars.  Identifiers are [A-Za-z0-9_'] runs.
  std::vector<token> tokenize(std::string_view text);

  class token_stream
  {
  public:
    token_stream(std::string_view text, std::string what);

    const token& peek(std::size_t ahead = 0) const;
    const token& next();
    bool accept(tok k);
    const token& expect(tok k, const char* description);
    bool at_end() const { return peek().kind == tok::end; }
    [[noreturn]] void fail(const std::string& msg) const;
    [[noreturn]] void fail_at(const token& t, const std::string& msg) const;

  private:
    std::vector<token> toks_;
    std::size_t i_ = 0;
    std::string what_;
  };
}
