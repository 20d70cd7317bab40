use std::collections::{BTreeSet, HashMap};

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::engine::Case;
use crate::model::{
    Attribution, CausalGraph, Context, ContextItem, DataPoint, Edge, Intervention,
    InterventionExpr, Judgment, ModelError, Probability, ValueTerm, VariableId,
};

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(text: &str) -> PResult<Self> {
        Ok(Parser { toks: tokenize(text)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: impl Into<String>) -> PResult<T> {
        let t = self.peek();
        Err(ParseError::new(t.span, expected, t.tok.to_string()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<SourceSpan> {
        if self.peek().tok == tok {
            Ok(self.bump().span)
        } else {
            self.unexpected(tok.to_string())
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<SourceSpan> {
        match &self.peek().tok {
            Tok::Word(w) if w == kw => Ok(self.bump().span),
            _ => self.unexpected(format!("`{kw}`")),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word(w) if w == kw)
    }

    fn word(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match &self.peek().tok {
            Tok::Word(w) => {
                let w = w.clone();
                Ok((w, self.bump().span))
            }
            _ => self.unexpected(what),
        }
    }

    fn ident(&mut self) -> PResult<(VariableId, SourceSpan)> {
        let (w, span) = self.word("a variable name")?;
        let v = VariableId::new(w).map_err(|e| semantic(span, "a variable name", e))?;
        Ok((v, span))
    }

    fn valueterm(&mut self) -> PResult<(ValueTerm, SourceSpan)> {
        let (first, start) = self.term()?;
        if self.peek().tok != Tok::Plus {
            return Ok((first, start));
        }
        let mut members = vec![first];
        let mut end = start;
        while self.eat(&Tok::Plus) {
            let (t, s) = self.term()?;
            members.push(t);
            end = s;
        }
        let span = start.to(end);
        let sum = ValueTerm::sum(members).map_err(|e| semantic(span, "distinct sum members", e))?;
        Ok((sum, span))
    }

    fn term(&mut self) -> PResult<(ValueTerm, SourceSpan)> {
        match self.peek().tok.clone() {
            Tok::Word(w) => {
                let span = self.bump().span;
                let atom = ValueTerm::atom(w).map_err(|e| semantic(span, "a value", e))?;
                Ok((atom, span))
            }
            Tok::Bang => {
                let start = self.bump().span;
                let (inner, end) = self.term()?;
                Ok((ValueTerm::complement(inner), start.to(end)))
            }
            Tok::LParen => {
                let start = self.bump().span;
                let (inner, _) = self.valueterm()?;
                let end = self.expect(Tok::RParen)?;
                Ok((inner, start.to(end)))
            }
            _ => self.unexpected("a value term"),
        }
    }

    fn attr(&mut self) -> PResult<(Attribution, SourceSpan)> {
        let (var, start) = self.ident()?;
        self.expect(Tok::Eq)?;
        let (value, end) = self.valueterm()?;
        Ok((Attribution::new(var, value), start.to(end)))
    }

    fn probability(&mut self) -> PResult<(Probability, SourceSpan)> {
        let (num, start) = self.word("a probability")?;
        let (text, span) = if self.eat(&Tok::Slash) {
            let (den, end) = self.word("a denominator")?;
            (format!("{num}/{den}"), start.to(end))
        } else {
            (num, start)
        };
        let p = Probability::parse(&text).map_err(|e| semantic(span, "a probability", e))?;
        Ok((p, span))
    }

    fn intervention(&mut self) -> PResult<(Intervention, SourceSpan)> {
        let (var, start) = self.ident()?;
        self.expect(Tok::Eq)?;
        let (value, vspan) = self.term()?;
        let span = start.to(vspan);
        let i = Intervention::new(var, value).map_err(|e| semantic(vspan, "an atomic value", e))?;
        Ok((i, span))
    }

    /// `[edges, nodes, attrs] I(var=value)`
    fn intervention_expr(&mut self) -> PResult<(InterventionExpr, SourceSpan)> {
        let start = self.expect(Tok::LBracket)?;
        let mut edges = Vec::new();
        let mut nodes = Vec::new();
        let mut attrs = Vec::new();
        if self.peek().tok != Tok::RBracket {
            loop {
                match self.peek_at(1) {
                    Tok::Arrow => {
                        let (e, s) = self.edge()?;
                        edges.push((e, s));
                    }
                    Tok::Eq => attrs.push(self.attr()?),
                    _ => nodes.push(self.ident()?.0),
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket)?;
        match &self.peek().tok {
            Tok::Word(w) if w == "I" => {
                self.bump();
            }
            _ => return self.unexpected("`I`"),
        }
        self.expect(Tok::LParen)?;
        let (intervention, _) = self.intervention()?;
        let end = self.expect(Tok::RParen)?;
        let span = start.to(end);

        let graph = build_graph(&edges, nodes)?;
        let dp = build_datapoint(&attrs)?;
        let expr = InterventionExpr::new(graph, dp, intervention)
            .map_err(|e| semantic(span, "a well-formed intervention expression", e))?;
        Ok((expr, span))
    }

    fn edge(&mut self) -> PResult<(Edge, SourceSpan)> {
        let (from, start) = self.ident()?;
        self.expect(Tok::Arrow)?;
        let (to, end) = self.ident()?;
        Ok((Edge::new(from, to), start.to(end)))
    }

    fn context_item(&mut self) -> PResult<(ContextItem, SourceSpan)> {
        if self.peek().tok == Tok::LBracket {
            let (e, s) = self.intervention_expr()?;
            return Ok((e.into(), s));
        }
        match self.peek_at(1) {
            Tok::Arrow => {
                let (e, s) = self.edge()?;
                Ok((e.into(), s))
            }
            Tok::Eq => {
                let (a, s) = self.attr()?;
                Ok((a.into(), s))
            }
            _ => {
                self.ident()?;
                self.unexpected("`->` or `=`")
            }
        }
    }

    fn judgment(&mut self) -> PResult<(Judgment, SourceSpan)> {
        let start = self.peek().span;
        let mut ctx = Context::new();
        if self.peek().tok != Tok::Turnstile {
            loop {
                let (item, span) = self.context_item()?;
                ctx.insert(item).map_err(|e| semantic(span, "at most one intervention", e))?;
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::Turnstile)?;
        let (target, tspan) = self.ident()?;
        self.expect(Tok::Eq)?;
        let (value, _) = self.valueterm()?;
        self.expect(Tok::At)?;
        let (prob, end) = self.probability()?;
        let span = start.to(end);
        let j = Judgment::new(ctx, target, value, prob)
            .map_err(|e| semantic(tspan, "a target absent from the context", e))?;
        Ok((j, span))
    }

    fn block<T>(
        &mut self,
        kw: &str,
        mut stmt: impl FnMut(&mut Self) -> PResult<T>,
    ) -> PResult<(Vec<T>, SourceSpan)> {
        let start = self.keyword(kw)?;
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        while self.peek().tok != Tok::RBrace {
            out.push(stmt(self)?);
            self.expect(Tok::Semi)?;
        }
        let end = self.expect(Tok::RBrace)?;
        Ok((out, start.to(end)))
    }

    fn graph_block(&mut self) -> PResult<GraphDecl> {
        let (stmts, span) = self.block("graph", |p| {
            if p.peek_at(1) == &Tok::Arrow {
                p.edge().map(GraphStmt::Edge)
            } else {
                p.ident().map(|(v, _)| GraphStmt::Node(v))
            }
        })?;
        let mut edges = Vec::new();
        let mut nodes = Vec::new();
        for s in stmts {
            match s {
                GraphStmt::Edge(e) => edges.push(e),
                GraphStmt::Node(n) => nodes.push(n),
            }
        }
        let graph = build_graph(&edges, nodes.clone())?;
        Ok(GraphDecl { graph, span })
    }

    fn expect_eof(&mut self) -> PResult<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }
}

enum GraphStmt {
    Edge((Edge, SourceSpan)),
    Node(VariableId),
}

struct GraphDecl {
    graph: CausalGraph,
    span: SourceSpan,
}

fn semantic(span: SourceSpan, expected: &str, err: ModelError) -> ParseError {
    ParseError::new(span, expected, err.to_string())
}

fn build_graph(edges: &[(Edge, SourceSpan)], nodes: Vec<VariableId>) -> PResult<CausalGraph> {
    let mut first_span: HashMap<&Edge, SourceSpan> = HashMap::new();
    for (e, s) in edges {
        if e.from == e.to {
            return Err(semantic(*s, "an edge between distinct nodes", ModelError::SelfEdge(e.from.clone())));
        }
        first_span.entry(e).or_insert(*s);
    }
    CausalGraph::from_edges(edges.iter().map(|(e, _)| e.clone()), nodes).map_err(|err| {
        // blame the last-declared edge on the cycle
        let span = match &err {
            ModelError::Cycle(cycle) => cycle
                .windows(2)
                .filter_map(|w| first_span.get(&Edge::new(w[0].clone(), w[1].clone())))
                .max_by_key(|s| s.offset)
                .copied(),
            _ => None,
        }
        .or_else(|| edges.last().map(|(_, s)| *s))
        .unwrap_or_default();
        semantic(span, "an acyclic graph", err)
    })
}

fn build_datapoint(attrs: &[(Attribution, SourceSpan)]) -> PResult<DataPoint> {
    let mut seen = BTreeSet::new();
    for (a, s) in attrs {
        if !seen.insert(&a.var) {
            return Err(semantic(*s, "each variable once", ModelError::DuplicateVariable(a.var.clone())));
        }
    }
    DataPoint::new(attrs.iter().map(|(a, _)| a.clone()).collect())
        .map_err(|e| semantic(SourceSpan::default(), "each variable once", e))
}

type CandidateBlock = (Vec<(Attribution, SourceSpan)>, Vec<(Edge, SourceSpan)>);

/// Parses a case file.
pub fn parse_case(text: &str) -> Result<Case, ParseError> {
    let mut p = Parser::new(text)?;
    let graph = p.graph_block()?;
    let (factual, _) = p.block("factual", |p| p.attr())?;
    p.keyword("intervene")?;
    let (intervention, ispan) = p.intervention()?;
    p.expect(Tok::Semi)?;
    p.keyword("target")?;
    let (target, tspan) = p.ident()?;
    p.expect(Tok::Eq)?;
    let (target_value, _) = p.valueterm()?;
    p.expect(Tok::Semi)?;

    let mut candidate: Option<CandidateBlock> = None;
    let mut factual_prob = None;
    loop {
        if p.at_keyword("candidate") && candidate.is_none() {
            let (stmts, _) = p.block("candidate", |p| {
                if p.peek_at(1) == &Tok::Arrow {
                    p.edge().map(Err)
                } else {
                    p.attr().map(Ok)
                }
            })?;
            let mut attrs = Vec::new();
            let mut edges = Vec::new();
            for s in stmts {
                match s {
                    Ok(a) => attrs.push(a),
                    Err(e) => edges.push(e),
                }
            }
            candidate = Some((attrs, edges));
        } else if p.at_keyword("factual_prob") && factual_prob.is_none() {
            p.bump();
            factual_prob = Some(p.probability()?.0);
            p.expect(Tok::Semi)?;
        } else {
            break;
        }
    }
    p.expect_eof()?;

    let graph_span = graph.span;
    let graph = graph.graph;
    let factual_dp = build_datapoint(&factual)?;
    for (a, s) in &factual {
        if !graph.contains_node(&a.var) {
            return Err(semantic(*s, "a graph node", ModelError::UnknownNode(a.var.clone())));
        }
        if a.var == target {
            return Err(semantic(*s, "an attribution other than the target", ModelError::TargetInContext(target.clone())));
        }
    }
    if !graph.contains_node(intervention.var()) {
        return Err(semantic(ispan, "a graph node", ModelError::UnknownNode(intervention.var().clone())));
    }
    if !graph.contains_node(&target) {
        return Err(semantic(tspan, "a graph node", ModelError::UnknownNode(target.clone())));
    }
    if &target == intervention.var() {
        return Err(ParseError::new(tspan, "a target different from the intervened variable", format!("`{target}`")));
    }
    let (candidate_override, candidate_edges) = match candidate {
        None => (None, None),
        Some((attrs, edges)) => {
            for (a, s) in &attrs {
                if a.var == target {
                    return Err(semantic(*s, "an attribution other than the target", ModelError::TargetInContext(target.clone())));
                }
            }
            let dp = build_datapoint(&attrs)?;
            let edges: Vec<Edge> = edges.into_iter().map(|(e, _)| e).collect();
            (Some(dp), if edges.is_empty() { None } else { Some(edges) })
        }
    };

    let case = Case {
        graph,
        factual: factual_dp,
        factual_prob,
        intervention,
        target,
        target_value,
        candidate_override,
        candidate_edges,
    };
    case.validate()
        .map_err(|e| ParseError::new(graph_span, "a well-formed case", e.to_string()))?;
    Ok(case)
}

/// Parses either a full case file or a lone `graph { ... }` block.
pub fn parse_graph_source(text: &str) -> Result<CausalGraph, ParseError> {
    let mut p = Parser::new(text)?;
    let graph = p.graph_block()?;
    if p.peek().tok == Tok::Eof {
        return Ok(graph.graph);
    }
    parse_case(text).map(|c| c.graph)
}

pub fn parse_judgment(text: &str) -> Result<Judgment, ParseError> {
    let mut p = Parser::new(text)?;
    let (j, _) = p.judgment()?;
    p.expect_eof()?;
    Ok(j)
}

pub fn parse_item(text: &str) -> Result<ContextItem, ParseError> {
    let mut p = Parser::new(text)?;
    let (item, _) = p.context_item()?;
    p.expect_eof()?;
    Ok(item)
}

pub fn parse_value_term(text: &str) -> Result<ValueTerm, ParseError> {
    let mut p = Parser::new(text)?;
    let (t, _) = p.valueterm()?;
    p.expect_eof()?;
    Ok(t)
}

/// Parses a judgment database: `;`-terminated judgments whose contexts hold
/// attributions only.
pub fn parse_judgment_db(text: &str) -> Result<Vec<Judgment>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while p.peek().tok != Tok::Eof {
        let (j, span) = p.judgment()?;
        if j.context().intervention().is_some() || !j.context().edges().is_empty() {
            return Err(ParseError::new(span, "attribution-only context", "causal edges or an intervention"));
        }
        p.expect(Tok::Semi)?;
        out.push(j);
    }
    Ok(out)
}
