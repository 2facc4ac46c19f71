#include <impmc/detail/lexer.hh>

#include <cctype>

namespace impmc::detail
{
  namespace
  {
    bool
    ident_char(char c)
    {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_'
        || c == '\'';
    }
  }

  std::vector<token>
  tokenize(std::string_view text)
  {
    std::vector<token> out;
    std::size_t i = 0;
    auto push = [&](tok k, std::size_t len)
    {
      out.push_back({k, std::string(text.substr(i, len)), i});
      i += len;
    };
    while (i < text.size())
      {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)))
          {
            ++i;
            continue;
          }
        if (ident_char(c) && c != '\'')
          {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j]))
              ++j;
            push(tok::ident, j - i);
            continue;
          }
        auto rest = text.substr(i);
        if (rest.starts_with("<->") || rest.starts_with("<=>"))
          push(tok::iff, 3);
        else if (rest.starts_with("->") || rest.starts_with("=>"))
          push(tok::implies, 2);
        else if (rest.starts_with("&&"))
          push(tok::amp, 2);
        else if (rest.starts_with("||"))
          push(tok::bar, 2);
        else
          switch (c)
            {
            case '(': push(tok::lparen, 1); break;
            case ')': push(tok::rparen, 1); break;
            case '{': push(tok::lbrace, 1); break;
            case '}': push(tok::rbrace, 1); break;
            case '[': push(tok::lbrack, 1); break;
            case ']': push(tok::rbrack, 1); break;
            case ',': push(tok::comma, 1); break;
            case ';': push(tok::semicolon, 1); break;
            case ':': push(tok::colon, 1); break;
            case '=': push(tok::equals, 1); break;
            case '!': case '~': push(tok::bang, 1); break;
            case '&': push(tok::amp, 1); break;
            case '|': push(tok::bar, 1); break;
            default:
              throw input_error("syntax error at position " + std::to_string(i)
                                + ": unexpected character '"
                                + std::string(1, c) + "'");
            }
      }
    out.push_back({tok::end, "", text.size()});
    return out;
  }

  token_stream::token_stream(std::string_view text, std::string what)
    : toks_(tokenize(text)), what_(std::move(what))
  {
  }

  const token&
  token_stream::peek(std::size_t ahead) const
  {
    return toks_[std::min(i_ + ahead, toks_.size() - 1)];
  }

  const token&
  token_stream::next()
  {
    const token& t = toks_[i_];
    if (i_ + 1 < toks_.size())
      ++i_;
    return t;
  }

  bool
  token_stream::accept(tok k)
  {
    if (peek().kind != k)
      return false;
    next();
    return true;
  }

  const token&
  token_stream::expect(tok k, const char* description)
  {
    if (peek().kind != k)
      fail_at(peek(), std::string("expected ") + description);
    return next();
  }

  void
  token_stream::fail(const std::string& msg) const
  {
    fail_at(peek(), msg);
  }

  void
  token_stream::fail_at(const token& t, const std::string& msg) const
  {
    std::string found = t.kind == tok::end ? "end of input"
      : "'" + t.text + "'";
    throw input_error("syntax error in " + what_ + " at position "
                      + std::to_string(t.pos) + ": " + msg + ", found "
                      + found);
  }
}
