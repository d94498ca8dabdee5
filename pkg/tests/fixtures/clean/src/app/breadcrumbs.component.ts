import { ChangeDetectionStrategy, Component, inject } from '@angular/core';
import { NavigationEnd, Router } from '@angular/router';
import { filter, map, startWith } from 'rxjs/operators';

@Component({
  selector: 'app-breadcrumbs',
  template: `
    <nav>
      <a *ngFor="let crumb of crumbs$ | async; let last = last" [routerLink]="crumb.url" [class.current]="last">
        {{ crumb.label | titlecase }}
      </a>
    </nav>
  `,
  changeDetection: ChangeDetectionStrategy.OnPush,
})
export class BreadcrumbsComponent {
  private readonly router = inject(Router);
  readonly crumbs$ = this.router.events.pipe(
    filter(e => e instanceof NavigationEnd),
    startWith(null),
    map(() =>
      this.router.url
        .split('/')
        .filter(Boolean)
        .map((label, i, all) => ({ label, url: '/' + all.slice(0, i + 1).join('/') })),
    ),
  );
}
