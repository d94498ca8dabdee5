import { ChangeDetectionStrategy, Component } from '@angular/core';
import { HttpClient } from '@angular/common/http';
import { takeUntilDestroyed } from '@angular/core/rxjs-interop';
import { Subject, fromEvent } from 'rxjs';
import { map, startWith } from 'rxjs/operators';

@Component({
  selector: 'app-theme-toggle',
  template: `
    <div [class]="cssClass$ | async">
      <button (click)="mode$.next('dark')">Dark</button>
      <button (click)="mode$.next('light')">Light</button>
      <small>System prefers {{ systemMode$ | async }}</small>
    </div>
  `,
  changeDetection: ChangeDetectionStrategy.OnPush,
})
export class ThemeToggleComponent {
  readonly mode$ = new Subject<'light' | 'dark'>();
  // expect: no-unused-observables
  oldTheme$ = this.http.get<string>('/api/theme');

  // expect: prefer-signal
  readonly cssClass$ = this.mode$.pipe(
    startWith('light'),
    map(mode => `theme-${mode}`),
  );

  // the source is a DOM event, not component state
  readonly systemMode$ = fromEvent<MediaQueryListEvent>(matchMedia('(prefers-color-scheme: dark)'), 'change').pipe(
    map(e => (e.matches ? 'dark' : 'light')),
    startWith('light'),
  );

  constructor(private http: HttpClient) {
    this.mode$.pipe(takeUntilDestroyed()).subscribe(mode => localStorage.setItem('theme', mode));
  }
}
