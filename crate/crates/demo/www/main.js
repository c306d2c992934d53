import init, { explore, heatmap, histograms } from './pkg/tmotif_demo.js';

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value) >>> 0;
const config = () => $('config').value;

function guarded(fn) {
  return () => {
    $('error').textContent = '';
    try {
      fn();
    } catch (e) {
      $('error').textContent = String(e);
    }
  };
}

function bars(counts) {
  const max = Math.max(1, ...counts);
  const el = document.createElement('div');
  el.className = 'bars';
  for (const c of counts) {
    const bar = document.createElement('div');
    bar.style.height = `${(100 * c) / max}%`;
    bar.title = String(c);
    el.appendChild(bar);
  }
  return el;
}

function showExplore() {
  const r = JSON.parse(explore(config()));
  $('regime').textContent =
    `regime: ${r.regime ?? 'n/a'}, longest possible span: ${r.span_bound} s, ${r.classes.length} classes`;
  $('classes').textContent = r.classes
    .map((c) => `${c.code}  ${c.nodes} nodes  ${c.pairs ?? '(disjoint pair)'}`)
    .join('\n');
}

function showHeatmap() {
  const r = JSON.parse(heatmap(config(), num('seed'), num('nodes'), num('events'), num('horizon')));
  const max = Math.max(1, ...r.cells.flat());
  const head = `<tr><th></th>${r.labels.map((l) => `<th>${l}</th>`).join('')}</tr>`;
  const rows = r.cells
    .map((row, i) => {
      const cells = row
        .map((c) => {
          const shade = Math.round(255 - (200 * Math.log10(c + 1)) / Math.log10(max + 1));
          return `<td style="background:rgb(${shade},${shade},255)">${c}</td>`;
        })
        .join('');
      return `<tr><th>${r.labels[i]}</th>${cells}</tr>`;
    })
    .join('');
  $('heat').innerHTML =
    `<p>${r.total} instances; RPIO pairs ${r.rpio}, CW pairs ${r.cw}. Row: first pair, column: second pair.</p>` +
    `<table class="heat">${head}${rows}</table>`;
}

function showHistograms() {
  const r = JSON.parse(
    histograms(config(), num('seed'), num('nodes'), num('events'), num('horizon'), num('bins'), num('width')),
  );
  const out = $('histograms');
  out.replaceChildren();
  r.positions.forEach((counts, i) => {
    const p = document.createElement('p');
    p.textContent = `event ${i + 2}: position within the motif span, 0% to 100%`;
    out.append(p, bars(counts));
  });
  const p = document.createElement('p');
  p.textContent = `timespan, bins of ${r.bin_width} s`;
  out.append(p, bars(r.spans));
}

await init();
$('explore').onclick = guarded(showExplore);
$('heatmap').onclick = guarded(showHeatmap);
$('hist').onclick = guarded(showHistograms);
guarded(showExplore)();
