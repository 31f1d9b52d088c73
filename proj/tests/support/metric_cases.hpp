#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace metric_cases {

struct Case {
  std::vector<std::string> src, ref, hyp;
};

inline std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

// Twenty (source, reference, hypothesis) triples covering identity, empty
// sides, repeats, partial edits and length mismatches.
inline std::vector<Case> all() {
  const char* rows[][3] = {
      {"a b c d", "a b c d", "a b c d"},
      {"int x = 1 ;", "int x = 2 ;", "int x = 2 ;"},
      {"int x = 1 ;", "int x = 2 ;", "int x = 1 ;"},
      {"int x = 1 ;", "int x = 2 ;", "int y = 3 ;"},
      {"a a a a", "a a b", "a a a"},
      {"return foo ( bar ) ;", "return foo ( bar , baz ) ;", "return foo ( baz , bar ) ;"},
      {"if ( a ) { b ( ) ; }", "if ( a ) { c ( ) ; }", "if ( a ) { c ( ) ; } else { }"},
      {"x", "y", ""},
      {"", "new Foo ( ) ;", "new Foo ( ) ;"},
      {"", "new Foo ( ) ;", "new Bar ( ) ;"},
      {"a b", "a b", "b a"},
      {"public void f ( ) { }", "public void g ( ) { }", "public void g ( ) { } }"},
      {"s . add ( 1 ) ; s . add ( 2 ) ;", "s . add ( 1 ) ; s . add ( 3 ) ;", "s . add ( 3 ) ; s . add ( 2 ) ;"},
      {"for ( int i = 0 ; i < n ; i ++ )", "for ( var i = 0 ; i < n ; i ++ )", "for ( var i = 0 ; i < n ; i ++ )"},
      {"a b c d e f g h", "a b X d e f g h", "a b X d e Y g h"},
      {"return null ;", "return null ;", "return ;"},
      {"x = x + 1 ;", "x ++ ;", "x += 1 ;"},
      {"f ( a , b , c )", "f ( a , c )", "f ( a , b )"},
      {"try { g ( ) ; } catch ( E e ) { }", "g ( ) ;", "g ( ) ;"},
      {"class A { }", "class A { int b ; }", "class A { int c ; } class"},
  };
  std::vector<Case> out;
  for (const auto& r : rows) out.push_back({split(r[0]), split(r[1]), split(r[2])});
  return out;
}

}  // namespace metric_cases
